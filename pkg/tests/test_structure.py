import pytest

from grouplab.config import Caps
from grouplab.errors import CapExceeded, ValidationError
from grouplab.groups import normal_closure
from grouplab.structure import (
    automorphism_group,
    conjugate_spread,
    enumerate_normal_subgroups,
    enumerate_subgroups,
    is_simple_nonabelian,
    minimal_generator_count,
    prufer_rank,
    sylow_subgroup,
)

from oracles import all_subgroups_bruteforce, spread_depth_bruteforce


def test_subgroup_counts(corpus):
    assert len(enumerate_subgroups(corpus["Z2"])) == 2
    assert len(enumerate_subgroups(corpus["S3"])) == 6
    assert len(enumerate_subgroups(corpus["V4"])) == 5
    assert len(enumerate_subgroups(corpus["Q8"])) == 6
    assert len(enumerate_subgroups(corpus["S4"])) == 30


def test_subgroups_match_bruteforce(corpus):
    for name in ("S3", "V4", "Q8", "Z12", "D4"):
        g = corpus[name]
        got = {frozenset(s.ids) for s in enumerate_subgroups(g)}
        assert got == all_subgroups_bruteforce(g)


def test_subgroup_canonical_order(corpus):
    subs = enumerate_subgroups(corpus["S3"])
    keys = [(len(s), s.ids) for s in subs]
    assert keys == sorted(keys)


def test_subgroup_caps(corpus):
    with pytest.raises(CapExceeded):
        enumerate_subgroups(corpus["S3"], caps=Caps(subgroup_order=4))
    with pytest.raises(CapExceeded):
        enumerate_subgroups(corpus["S4"], max_count=5)


def test_normal_subgroups(corpus):
    assert [len(s) for s in enumerate_normal_subgroups(corpus["S3"])] == [1, 3, 6]
    assert [len(s) for s in enumerate_normal_subgroups(corpus["A5"])] == [1, 60]
    # abelian: every subgroup is normal
    z12 = corpus["Z12"]
    assert {s.ids for s in enumerate_normal_subgroups(z12)} == \
        {s.ids for s in enumerate_subgroups(z12)}


def test_normal_subgroups_match_filtering(corpus):
    for name in ("S4", "D4", "Q8", "A4"):
        g = corpus[name]
        via_lattice = {s.ids for s in enumerate_normal_subgroups(g)}
        via_filter = {s.ids for s in enumerate_subgroups(g) if s.is_normal()}
        assert via_lattice == via_filter


def test_is_simple_nonabelian(corpus):
    assert is_simple_nonabelian(corpus["A5"])
    assert not is_simple_nonabelian(corpus["S3"])
    assert not is_simple_nonabelian(corpus["Z7"])


def test_spread_exponent_two_abelian(corpus):
    report = conjugate_spread(corpus["V4"])
    assert report.m == 1


def test_spread_s3_matches_oracle(corpus):
    s3 = corpus["S3"]
    report = conjugate_spread(s3)
    assert report.m == 2
    for witness in report.witnesses:
        depth_max, depth = spread_depth_bruteforce(s3, witness.element)
        assert witness.depth == depth_max
        assert depth[witness.worst] == witness.depth
        closure = normal_closure(s3, witness.element)
        assert set(depth) == set(closure.ids)


def test_spread_q8_golden(corpus):
    # frozen from the brute-force oracle
    report = conjugate_spread(corpus["Q8"])
    assert report.m == 2
    oracle_m = max(spread_depth_bruteforce(corpus["Q8"], x)[0] for x in corpus["Q8"].elements())
    assert oracle_m == 2


def test_spread_witness_depths(corpus):
    g = corpus["A4"]
    report = conjugate_spread(g)
    for witness in report.witnesses:
        _, depth = spread_depth_bruteforce(g, witness.element)
        assert depth[witness.worst] == witness.depth
        assert all(d <= witness.depth for d in depth.values())


def test_spread_cap(corpus):
    with pytest.raises(CapExceeded):
        conjugate_spread(corpus["A5"], caps=Caps(spread_order=32))


def test_minimal_generator_count(corpus):
    assert minimal_generator_count(corpus["Z1"]) == 0
    assert minimal_generator_count(corpus["Z12"]) == 1
    assert minimal_generator_count(corpus["V4"]) == 2
    assert minimal_generator_count(corpus["S3"]) == 2
    assert minimal_generator_count(corpus["Q8"]) == 2


def test_prufer_rank(corpus):
    assert prufer_rank(corpus["Z16"]) == 1
    assert prufer_rank(corpus["V4"]) == 2
    assert prufer_rank(corpus["S3"]) == 2
    assert prufer_rank(corpus["Q8"]) == 2
    assert prufer_rank(corpus["Z1"]) == 0


def test_sylow(corpus):
    s3 = corpus["S3"]
    syl3 = sylow_subgroup(s3, 3)
    assert len(syl3) == 3
    assert sorted(syl3.ids) == sorted(normal_closure(s3, syl3.ids[1]).ids)
    # p not dividing the order: trivial
    assert len(sylow_subgroup(s3, 5)) == 1
    z12 = corpus["Z12"]
    syl2 = sylow_subgroup(z12, 2)
    assert len(syl2) == 4 and syl2.is_normal()
    s4 = corpus["S4"]
    assert len(sylow_subgroup(s4, 2)) == 8
    assert len(sylow_subgroup(s4, 3)) == 3
    with pytest.raises(ValidationError):
        sylow_subgroup(s3, 4)


def test_automorphisms_z2(corpus):
    report = automorphism_group(corpus["Z2"])
    assert len(report.automorphisms) == 1


def test_automorphisms_v4(corpus):
    report = automorphism_group(corpus["V4"])
    assert len(report.automorphisms) == 6
    # characteristic subgroups: only the trivial one and the whole group
    marked = [sub for sub, flag in zip(report.normal_subgroups, report.characteristic) if flag]
    assert sorted(len(s) for s in marked) == [1, 4]


def test_automorphisms_s3_all_inner(corpus):
    s3 = corpus["S3"]
    report = automorphism_group(s3)
    assert len(report.automorphisms) == 6
    inner = set()
    for h in s3.elements():
        inner.add(tuple(s3.conjugate(x, h) for x in s3.elements()))
    got = {tuple(int(v) for v in a.mapping) for a in report.automorphisms}
    assert got == inner
    # every normal subgroup of S3 is characteristic
    assert all(report.characteristic)


def test_automorphism_cap(corpus):
    with pytest.raises(CapExceeded):
        automorphism_group(corpus["S4"], caps=Caps(automorphism_order=8))


def test_automorphisms_are_homs(corpus):
    from grouplab.groups import GroupHom

    g = corpus["D4"]
    report = automorphism_group(g)
    assert len(report.automorphisms) == 8
    for a in report.automorphisms:
        GroupHom(g, g, a.mapping, validate=True)  # raises if not a hom
        assert sorted(int(v) for v in a.mapping) == list(g.elements())
