"""Explicit finite fields and small commutative rings, stored as tables.

Bundled fields: GF(p) for any prime p, plus GF(4), GF(8) and GF(9) via
fixed irreducible polynomials.  Elements of GF(p^k) are polynomial
coefficient vectors encoded base p (little-endian), so 0 is the zero
element, 1 is the one, and the prime subfield is always {0, .., p-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, GroupLabError, NilpotentElementError, ValidationError

__all__ = [
    "AlgebraFactor",
    "FiniteCommutativeAlgebra",
    "MRDecomposition",
    "field_by_name",
    "find_nilpotent",
    "gf",
    "mr_decompose",
    "prime_subfield_ids",
    "zmod",
]

_FULL_CHECK_LIMIT = 256  # associativity/distributivity checked exhaustively below this size


class FiniteCommutativeAlgebra:
    """A commutative ring with 1 given by full addition and multiplication tables."""

    def __init__(
        self,
        add_table: np.ndarray | Sequence[Sequence[int]],
        mul_table: np.ndarray | Sequence[Sequence[int]],
        *,
        char: int,
        one_id: int,
        name: str = "R",
        validate: bool = True,
    ):
        add = np.ascontiguousarray(np.asarray(add_table, dtype=np.int32))
        mul = np.ascontiguousarray(np.asarray(mul_table, dtype=np.int32))
        n = add.shape[0]
        if add.ndim != 2 or add.shape != (n, n) or mul.shape != (n, n):
            raise ValidationError("algebra tables must be square and equal-sized")
        self.size = int(n)
        self.char = int(char)
        self.one = int(one_id)
        self.zero = 0
        self.name = name
        if validate:
            ids = np.arange(n, dtype=np.int32)
            if not np.array_equal(add[0], ids):
                raise ValidationError("element 0 must be the additive identity")
            if not np.array_equal(add, add.T) or not np.array_equal(mul, mul.T):
                raise ValidationError("algebra is not commutative")
            if not np.array_equal(mul[one_id], ids):
                raise ValidationError("designated one is not a multiplicative identity")
            if not np.array_equal(np.sort(add, axis=1), np.broadcast_to(ids, add.shape)):
                raise ValidationError("addition rows are not permutations")
            acc = np.zeros(n, dtype=np.int32)
            for _ in range(self.char):
                acc = add[acc, ids]
            if acc.any():
                raise ValidationError("characteristic does not annihilate the ring")
            if n <= _FULL_CHECK_LIMIT:
                self._exhaustive_axioms(add, mul)
        add.setflags(write=False)
        mul.setflags(write=False)
        self.add_table = add
        self.mul_table = mul

    @staticmethod
    def _exhaustive_axioms(add: np.ndarray, mul: np.ndarray) -> None:
        n = add.shape[0]
        for a in range(n):
            if not np.array_equal(add[add[a, :], :], add[a][add]):
                raise ValidationError("addition is not associative")
            if not np.array_equal(mul[mul[a, :], :], mul[a][mul]):
                raise ValidationError("multiplication is not associative")
            lhs = mul[a][add]  # a * (b + c)
            rhs = add[mul[a][:, None], mul[a][None, :]]  # a*b + a*c
            if not np.array_equal(lhs, rhs):
                raise ValidationError("multiplication does not distribute over addition")

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add_table[a] == 0)[0])

    def elements(self) -> range:
        return range(self.size)

    def idempotents(self) -> list[int]:
        ids = np.arange(self.size, dtype=np.int32)
        diag = self.mul_table[ids, ids]
        return np.flatnonzero(diag == ids).tolist()

    def is_field(self) -> bool:
        if self.size < 2:
            return False
        nz = np.arange(1, self.size)
        return bool((self.mul_table[np.ix_(nz, nz)] != 0).all())

    def __repr__(self) -> str:
        return f"FiniteCommutativeAlgebra({self.name!r}, size={self.size})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


# Irreducible polynomials for the bundled prime-power fields, little-endian
# coefficients of x^k = -(lower terms).
_IRREDUCIBLE = {
    4: (2, 2, (1, 1)),   # x^2 + x + 1 over GF(2)
    8: (2, 3, (1, 1, 0)),  # x^3 + x + 1 over GF(2)
    9: (3, 2, (1, 0)),   # x^2 + 1 over GF(3)
}


def _poly_field_tables(p: int, k: int, poly: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    size = p**k

    def digits(x: int) -> list[int]:
        out = []
        for _ in range(k):
            out.append(x % p)
            x //= p
        return out

    def encode(cs: Sequence[int]) -> int:
        out = 0
        for c in reversed(cs):
            out = out * p + (c % p)
        return out

    def polymul(a: list[int], b: list[int]) -> list[int]:
        raw = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    raw[i + j] = (raw[i + j] + ai * bj) % p
        # reduce x^k -> -(poly), highest degree first
        for d in range(2 * k - 2, k - 1, -1):
            c = raw[d]
            if c:
                raw[d] = 0
                for j, pj in enumerate(poly):
                    raw[d - k + j] = (raw[d - k + j] - c * pj) % p
        return raw[:k]

    add = np.zeros((size, size), dtype=np.int32)
    mul = np.zeros((size, size), dtype=np.int32)
    digs = [digits(x) for x in range(size)]
    for a in range(size):
        for b in range(a, size):
            s = encode([(x + y) % p for x, y in zip(digs[a], digs[b])])
            m = encode(polymul(digs[a], digs[b]))
            add[a, b] = add[b, a] = s
            mul[a, b] = mul[b, a] = m
    return add, mul


def gf(q: int) -> FiniteCommutativeAlgebra:
    """The finite field with q elements, for prime q or q in {4, 8, 9}."""
    if _is_prime(q):
        ids = np.arange(q, dtype=np.int64)
        add = (ids[:, None] + ids[None, :]) % q
        mul = (ids[:, None] * ids[None, :]) % q
        field = FiniteCommutativeAlgebra(add, mul, char=q, one_id=1, name=f"GF{q}")
    elif q in _IRREDUCIBLE:
        p, k, poly = _IRREDUCIBLE[q]
        add, mul = _poly_field_tables(p, k, poly)
        field = FiniteCommutativeAlgebra(add, mul, char=p, one_id=1, name=f"GF{q}")
    else:
        raise ValidationError(f"no bundled field of size {q}")
    if not field.is_field():
        raise GroupLabError(f"bundled GF({q}) tables are not a field")
    return field


def zmod(n: int) -> FiniteCommutativeAlgebra:
    """Integers modulo n (a ring, not a field for composite n)."""
    if n < 2:
        raise ValidationError("modulus must be at least 2")
    ids = np.arange(n, dtype=np.int64)
    add = (ids[:, None] + ids[None, :]) % n
    mul = (ids[:, None] * ids[None, :]) % n
    return FiniteCommutativeAlgebra(add, mul, char=n, one_id=1, name=f"Z{n}")


_FIELD_NAMES = {"GF2": 2, "GF3": 3, "GF4": 4, "GF5": 5, "GF7": 7, "GF8": 8, "GF9": 9}


def field_by_name(name: str) -> FiniteCommutativeAlgebra:
    if name not in _FIELD_NAMES:
        raise ValidationError(f"unknown field name {name!r}; known: {sorted(_FIELD_NAMES)}")
    return gf(_FIELD_NAMES[name])


def prime_subfield_ids(field: FiniteCommutativeAlgebra) -> frozenset[int]:
    return frozenset(range(field.char))


def find_nilpotent(size: int, mul_table: np.ndarray) -> int | None:
    """Smallest id of a nonzero nilpotent element, or None.

    Uses repeated squaring: x is nilpotent iff x^(2^k) = 0 once 2^k covers
    the ring size.
    """
    ids = np.arange(size, dtype=np.int32)
    cur = ids.copy()
    steps = max(1, int(size).bit_length())
    for _ in range(steps):
        cur = mul_table[cur, cur]
    hits = np.flatnonzero((cur == 0) & (ids != 0))
    return int(hits[0]) if hits.size else None


@dataclass(frozen=True)
class AlgebraFactor:
    """One field factor of a decomposed ring."""

    idempotent: int                 # its unit, as an element of the parent ring
    element_ids: tuple[int, ...]    # parent-ring ids of its elements, ascending
    field: FiniteCommutativeAlgebra  # reindexed tables over element_ids


@dataclass(frozen=True)
class MRDecomposition:
    factors: tuple[AlgebraFactor, ...]
    # component_ids[x] = tuple of factor-local ids of the projections of x
    component_ids: tuple[tuple[int, ...], ...]


def mr_decompose(ring: FiniteCommutativeAlgebra, *, caps: Caps = DEFAULT_CAPS) -> MRDecomposition:
    """Split a nilpotent-free commutative ring into its field factors.

    Finds the primitive idempotents, builds each factor e*R as a field, and
    verifies that the componentwise projection is a ring isomorphism.
    Raises NilpotentElementError with a witness if the ring has one.
    """
    n = ring.size
    if n > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, n)
    witness = find_nilpotent(n, ring.mul_table)
    if witness is not None:
        raise NilpotentElementError(witness, f"ring {ring.name}")
    idem = [e for e in ring.idempotents() if e != 0]
    primitive = []
    for e in idem:
        if not any(f != e and ring.mul(f, e) == f for f in idem):
            primitive.append(e)
    primitive.sort()
    total = 0
    for i, e in enumerate(primitive):
        total = ring.add(total, e)
        for f in primitive[i + 1:]:
            if ring.mul(e, f) != 0:
                raise GroupLabError("primitive idempotents are not orthogonal")
    if total != ring.one:
        raise GroupLabError("primitive idempotents do not sum to one")

    factors = []
    locals_per_factor = []
    for e in primitive:
        member_ids = np.unique(ring.mul_table[e]).astype(np.int32)
        local = {int(x): i for i, x in enumerate(member_ids)}
        sub_add = np.array([[local[ring.add(a, b)] for b in member_ids] for a in member_ids],
                           dtype=np.int32)
        sub_mul = np.array([[local[ring.mul(a, b)] for b in member_ids] for a in member_ids],
                           dtype=np.int32)
        field = FiniteCommutativeAlgebra(
            sub_add, sub_mul, char=ring.char if _is_prime(ring.char) else _additive_order(ring, e),
            one_id=local[e], name=f"{ring.name}.e{e}",
        )
        if not field.is_field():
            raise GroupLabError("a factor of a nilpotent-free ring is not a field")
        factors.append(AlgebraFactor(idempotent=e, element_ids=tuple(int(x) for x in member_ids),
                                     field=field))
        locals_per_factor.append(local)

    components = []
    seen = set()
    for x in ring.elements():
        comp = tuple(locals_per_factor[i][ring.mul(f.idempotent, x)]
                     for i, f in enumerate(factors))
        if comp in seen:
            raise GroupLabError("componentwise projection is not injective")
        seen.add(comp)
        components.append(comp)
    sizes = 1
    for f in factors:
        sizes *= f.field.size
    if sizes != n:
        raise GroupLabError("factor sizes do not multiply to the ring size")
    return MRDecomposition(factors=tuple(factors), component_ids=tuple(components))


def _additive_order(ring: FiniteCommutativeAlgebra, x: int) -> int:
    acc, k = x, 1
    while acc != 0:
        acc = ring.add(acc, x)
        k += 1
    return k
