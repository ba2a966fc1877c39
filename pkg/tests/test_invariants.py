"""Cross-cutting invariants spanning several modules."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplab.boolean import BooleanIdeal, FiniteBooleanRing, build_boolean_ring, quotient_ring
from grouplab.boolpower import materialize_bp_group, verify_ideal_correspondence
from grouplab.errors import ValidationError
from grouplab.groups import (
    GroupHom,
    commutator_subgroup,
    commuting_pair_count,
    cyclic_group,
    direct_product,
    quotient,
    subgroup_closure,
)
from grouplab.measure import epsilon_evidence
from grouplab.structure import enumerate_normal_subgroups, enumerate_subgroups
from grouplab.towers import direct_power_system


def test_correspondence_fails_for_nonsimple_nonabelian(corpus):
    # the diagonal-style failure is not an abelian artifact: S3 fails too
    rep = verify_ideal_correspondence(corpus["S3"], build_boolean_ring(2))
    assert not rep.expected_match
    assert not rep.matches
    assert rep.normal_count == 10
    assert rep.ideal_count == 4


def test_commutator_subgroup_containment(corpus):
    # [A, B] sits inside every normal subgroup containing all commutators
    g = corpus["S4"]
    subs = enumerate_subgroups(g)
    for a, b in itertools.islice(itertools.combinations(subs, 2), 60):
        comm = commutator_subgroup(a, b)
        for x in a.ids:
            for y in b.ids:
                assert g.commutator(x, y) in comm


def test_hom_compose_and_kernels(corpus):
    z8, z4, z2 = corpus["Z8"], corpus["Z4"], corpus["Z2"]
    p1 = GroupHom(z8, z4, [x % 4 for x in range(8)])
    p2 = GroupHom(z4, z2, [x % 2 for x in range(4)])
    comp = p2.compose(p1)
    assert [comp(x) for x in range(8)] == [x % 2 for x in range(8)]
    assert len(comp.kernel()) == 4
    assert comp.image().ids == (0, 1)


def test_subgroup_as_group_embedding(corpus):
    g = corpus["S4"]
    for sub in enumerate_subgroups(g)[:12]:
        grp, embed = sub.as_group()
        assert embed.is_injective()
        assert set(int(v) for v in embed.mapping) == set(sub.ids)
        GroupHom(grp, g, embed.mapping, validate=True)


def test_quotient_of_product_by_factor(corpus):
    s3 = corpus["S3"]
    prod = direct_product(s3, corpus["Z2"])
    factor = subgroup_closure(prod, [1])  # second coordinate generator
    assert len(factor) == 2
    q, hom = quotient(prod, factor)
    assert q.order == 6
    assert commuting_pair_count(q) == 18


def test_epsilon_evidence_accepts_tower(corpus):
    system = direct_power_system(corpus["S3"], 2)
    ev = epsilon_evidence(system)
    assert [r.order for r in ev.rows] == [6, 36]
    assert ev.epsilon == Fraction(1, 4)
    assert ev.fractions_decay


def test_quotient_ring_rejects_foreign_ideal():
    a = build_boolean_ring(2)
    b = build_boolean_ring(3)
    with pytest.raises(ValidationError):
        quotient_ring(a, BooleanIdeal(b, 0b001))


def test_boolean_power_size(corpus):
    mat = materialize_bp_group(corpus["Z4"], build_boolean_ring(2))
    assert mat.power.size == 16 == mat.group.order


@settings(max_examples=40)
@given(st.integers(2, 12), st.integers(2, 12))
def test_commuting_count_multiplicative(n, m):
    a, b = cyclic_group(n), cyclic_group(m)
    prod = direct_product(a, b)
    assert commuting_pair_count(prod) == commuting_pair_count(a) * commuting_pair_count(b)


def test_normal_lattice_closed_under_joins(corpus):
    for name in ("S4", "A4", "D4"):
        g = corpus[name]
        normals = enumerate_normal_subgroups(g)
        keys = {s.ids for s in normals}
        for a, b in itertools.combinations(normals, 2):
            join = subgroup_closure(g, a.ids + b.ids)
            assert join.ids in keys
            inter = tuple(sorted(set(a.ids) & set(b.ids)))
            assert inter in keys  # intersections of normals are normal


def test_cli_rho_mode_annotation(tmp_path):
    import json

    from grouplab.cli import main

    out = tmp_path / "r"
    assert main(["rho", "--kind", "com", "--mode", "quotients-of-G",
                 "--out", str(out)]) == 0
    items = json.loads(out.read_text())["items"]
    assert all(row["family_mode"] == "quotients-of-G" for row in items)


def test_exponents(corpus):
    assert corpus["Z12"].exponent() == 12
    assert corpus["S3"].exponent() == 6
    assert corpus["Q8"].exponent() == 4
    assert corpus["A5"].exponent() == 30
