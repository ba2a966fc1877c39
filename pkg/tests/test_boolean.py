import pytest
from hypothesis import given
from hypothesis import strategies as st

from grouplab.boolean import (
    AugmentedBooleanAlgebra,
    BooleanIdeal,
    FiniteBooleanRing,
    build_boolean_ring,
    quotient_ring,
    refine_chain,
    stone_points,
)
from grouplab.errors import CapExceeded, ValidationError


def test_build_bounds():
    assert build_boolean_ring(1).size == 2
    assert build_boolean_ring(3).size == 8
    with pytest.raises(CapExceeded):
        build_boolean_ring(21)
    with pytest.raises(ValidationError):
        build_boolean_ring(0)


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_ring_axioms(a, b, c):
    ring = FiniteBooleanRing(8)
    assert ring.mul(a, a) == a
    assert ring.add(a, a) == 0
    assert ring.add(a, b) == ring.add(b, a)
    assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
    assert ring.mul(a, ring.one) == a


def test_idempotence_exhaustive():
    ring = build_boolean_ring(6)
    for x in ring.elements():
        assert ring.mul(x, x) == x


def test_ideal_closure_properties():
    ring = build_boolean_ring(4)
    ideal = BooleanIdeal.from_generators(ring, [0b0011, 0b0101])
    assert ideal.span == 0b0111
    elements = list(ideal.elements())
    assert len(elements) == ideal.size == 8
    for x in elements:
        for y in elements:
            assert ring.add(x, y) in ideal
        for r in ring.elements():
            assert ring.mul(x, r) in ideal


def test_quotient_ring_examples():
    ring = build_boolean_ring(3)
    trivial = BooleanIdeal(ring, 0)
    assert quotient_ring(ring, trivial).atom_count == 3
    one_atom = BooleanIdeal.from_generators(ring, [0b001])
    q = quotient_ring(ring, one_atom)
    assert q.atom_count == 2
    whole = BooleanIdeal(ring, ring.one)
    degenerate = quotient_ring(ring, whole)
    assert degenerate.atom_count == 0
    assert degenerate.ring.size == 1


def test_quotient_projection_is_hom_with_kernel():
    ring = build_boolean_ring(4)
    ideal = BooleanIdeal.from_generators(ring, [0b0011])
    q = quotient_ring(ring, ideal)
    proj = q.project
    for a in ring.elements():
        for b in ring.elements():
            assert proj(ring.add(a, b)) == q.ring.add(proj(a), proj(b))
            assert proj(ring.mul(a, b)) == q.ring.mul(proj(a), proj(b))
    kernel = [a for a in ring.elements() if proj(a) == 0]
    assert set(kernel) == set(ideal.elements())
    # coset count
    assert q.ring.size * ideal.size == ring.size


def test_stone_points():
    for n in (1, 3, 5):
        ring = build_boolean_ring(n)
        points = stone_points(ring)
        assert len(points) == n
        for pt in points:
            assert pt.is_maximal() and pt.is_proper()
            # maximality, exhaustively: adding any outside element generates everything
            for x in ring.elements():
                if x not in pt:
                    grown = BooleanIdeal.from_generators(ring, [pt.span, x])
                    assert grown.span == ring.one
    # quotients have one point per remaining atom
    ring = build_boolean_ring(3)
    q = quotient_ring(ring, BooleanIdeal.from_generators(ring, [0b001]))
    assert len(stone_points(q.ring)) == 2


def test_refine_chain_shapes():
    chain = refine_chain(1, 0)
    assert len(chain.rings) == 1 and not chain.embeddings
    chain = refine_chain(1, 2)
    assert [r.atom_count for r in chain.rings] == [1, 2, 4]
    assert chain.limit_annotation == "with-identity"
    assert refine_chain(1, 1, limit_annotation="without-identity").limit_annotation \
        == "without-identity"
    with pytest.raises(ValidationError):
        refine_chain(1, 1, limit_annotation="mystery")
    with pytest.raises(CapExceeded):
        refine_chain(1, 11)
    with pytest.raises(CapExceeded):
        refine_chain(3, 4)  # 48 atoms


def test_refine_chain_embeddings_preserve_operations():
    chain = refine_chain(2, 2)
    for emb in chain.embeddings:
        src = emb.source
        for a in src.elements():
            for b in src.elements():
                assert emb(src.add(a, b)) == emb.target.add(emb(a), emb(b))
                assert emb(src.mul(a, b)) == emb.target.mul(emb(a), emb(b))
        assert emb(src.one) == emb.target.one
        images = {emb(a) for a in src.elements()}
        assert len(images) == src.size


def test_augmented_algebra_lattice_check():
    ring = build_boolean_ring(3)
    # closed sets {atom0}, {atom0, atom1}, whole: a chain, fine
    ideals = {
        "a": BooleanIdeal(ring, ring.one ^ 0b001),
        "b": BooleanIdeal(ring, ring.one ^ 0b011),
        "all": BooleanIdeal(ring, 0),
    }
    alg = AugmentedBooleanAlgebra(ring, ideals)
    assert alg.closed_set("a") == 0b001
    # closed sets {atom0}, {atom1} without their union/intersection: not a lattice
    with pytest.raises(ValidationError):
        AugmentedBooleanAlgebra(ring, {
            "a": BooleanIdeal(ring, ring.one ^ 0b001),
            "b": BooleanIdeal(ring, ring.one ^ 0b010),
        })
