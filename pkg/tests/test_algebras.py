import pytest
from hypothesis import given
from hypothesis import strategies as st

from grouplab.algebras import (
    field_by_name,
    find_nilpotent,
    gf,
    mr_decompose,
    prime_subfield_ids,
    zmod,
)
from grouplab.errors import NilpotentElementError, ValidationError


@pytest.mark.parametrize("q,p", [(2, 2), (3, 3), (4, 2), (5, 5), (7, 7), (8, 2), (9, 3)])
def test_bundled_fields_are_fields(q, p):
    field = gf(q)
    assert field.size == q
    assert field.char == p
    assert field.is_field()
    # prime subfield is an initial segment
    sub = prime_subfield_ids(field)
    assert sub == frozenset(range(p))
    for a in sub:
        for b in sub:
            assert field.add(a, b) in sub and field.mul(a, b) in sub


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_gf9_axioms(a, b, c):
    field = gf(9)
    assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
    assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))


def test_gf4_structure():
    field = gf(4)
    # x * x = x + 1 for the generator under x^2 + x + 1
    assert field.mul(2, 2) == 3
    assert field.mul(2, 3) == 1  # x * (x+1) = x^2 + x = 1


def test_unknown_field_name():
    with pytest.raises(ValidationError):
        field_by_name("GF6")
    assert field_by_name("GF8").size == 8


def test_zmod4_nilpotent():
    ring = zmod(4)
    witness = find_nilpotent(ring.size, ring.mul_table)
    assert witness == 2
    with pytest.raises(NilpotentElementError) as err:
        mr_decompose(ring)
    assert err.value.witness == 2


def test_mr_decompose_field_is_single_factor():
    decomp = mr_decompose(gf(4))
    assert len(decomp.factors) == 1
    assert decomp.factors[0].field.size == 4


def test_mr_decompose_zmod6():
    decomp = mr_decompose(zmod(6))
    assert sorted(f.field.size for f in decomp.factors) == [2, 3]
    # componentwise map is injective over the whole ring
    assert len(set(decomp.component_ids)) == 6


def test_mr_decompose_product_of_fields():
    from grouplab.boolean import build_boolean_ring
    from grouplab.boolpower import filtered_power, filtered_power_spec

    spec = filtered_power_spec(gf(2), build_boolean_ring(2), [])
    ring = filtered_power(spec)
    decomp = mr_decompose(ring)
    assert [f.field.size for f in decomp.factors] == [2, 2]
    for factor in decomp.factors:
        assert factor.field.is_field()
