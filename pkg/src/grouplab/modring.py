"""Turning a module with a spanning orbit into a commutative-style ring.

Given a group action on a GF(p) space and a vector v whose translates span,
the space is realized as the quotient of the group algebra GF(p)[S] by the
annihilator of v.  Multiplication descends exactly when that annihilator is
a two-sided ideal; otherwise a concrete witness of ill-definedness is
returned instead of a ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebras import FiniteCommutativeAlgebra
from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, GroupLabError, ValidationError
from .groups import FiniteGroup
from .linalg import inv_gfp, nullspace_gfp

__all__ = [
    "FaithfulnessReport",
    "GModuleAction",
    "IllDefinedWitness",
    "ModuleRing",
    "OrbitSpan",
    "RingConstruction",
    "TranslateDecomposition",
    "action_from_matrices",
    "faithfulness_report",
    "mr_factor_sizes_for_report",
    "nilpotent_free_check",
    "orbit_span_check",
    "permutation_module_action",
    "ring_construct",
    "sum_zero_action",
    "translate_decomposition",
]


@dataclass(frozen=True)
class GModuleAction:
    """A right action of a finite group on GF(p)^dim by invertible matrices.

    Row vectors act on the right: v^h = v @ matrix(h), so the matrix
    assignment is an ordinary homomorphism into GL(dim, p).
    """

    group: FiniteGroup
    prime: int
    dim: int
    matrices: np.ndarray  # shape (|S|, dim, dim), entries reduced mod p

    def translate(self, vec: Sequence[int], h: int) -> tuple[int, ...]:
        out = (np.asarray(vec, dtype=np.int64) @ self.matrices[h]) % self.prime
        return tuple(int(x) for x in out)

    def vectors(self) -> list[tuple[int, ...]]:
        coords = np.indices((self.prime,) * self.dim).reshape(self.dim, -1).T
        return [tuple(int(x) for x in row) for row in coords]


def action_from_matrices(group: FiniteGroup, prime: int, dim: int,
                         matrices: Mapping[int, Sequence[Sequence[int]]],
                         *, caps: Caps = DEFAULT_CAPS) -> GModuleAction:
    """Build and validate an action from matrices on (at least) a generating set.

    Missing elements are filled in multiplicatively; the homomorphism law is
    then checked on the full table.
    """
    if prime < 2 or any(prime % q == 0 for q in range(2, int(prime**0.5) + 1)):
        raise ValidationError(f"{prime} is not prime")
    if prime**dim > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, prime**dim)
    n = group.order
    mats: list[np.ndarray | None] = [None] * n
    mats[0] = np.eye(dim, dtype=np.int64)
    for eid, rows in matrices.items():
        m = np.asarray(rows, dtype=np.int64) % prime
        if m.shape != (dim, dim):
            raise ValidationError(f"matrix for element {eid} has wrong shape")
        mats[int(eid)] = m
    changed = True
    while changed:
        changed = False
        known = [i for i in range(n) if mats[i] is not None]
        for a in known:
            for b in known:
                ab = group.mul(a, b)
                if mats[ab] is None:
                    mats[ab] = (mats[a] @ mats[b]) % prime
                    changed = True
    if any(m is None for m in mats):
        raise ValidationError("matrices do not cover a generating set")
    stack = np.stack([m for m in mats]) % prime
    for a in range(n):
        inv_gfp(stack[a], prime)  # raises if singular
        for b in range(n):
            if not np.array_equal(stack[group.mul(a, b)], (stack[a] @ stack[b]) % prime):
                raise ValidationError("matrix assignment is not a homomorphism")
    stack.setflags(write=False)
    return GModuleAction(group=group, prime=prime, dim=dim, matrices=stack)


@dataclass(frozen=True)
class OrbitSpan:
    spans: bool
    basis_elements: tuple[int, ...]          # group element ids, greedy by id
    basis_vectors: tuple[tuple[int, ...], ...]


def orbit_span_check(action: GModuleAction, v: Sequence[int]) -> OrbitSpan:
    """Do the translates of v span the space?  Greedy translate basis if so."""
    p, d = action.prime, action.dim
    chosen_ids: list[int] = []
    chosen_vecs: list[tuple[int, ...]] = []
    current = np.zeros((0, d), dtype=np.int64)
    from .linalg import rank_gfp

    for h in range(action.group.order):
        w = action.translate(v, h)
        trial = np.vstack([current, np.asarray(w, dtype=np.int64)])
        if rank_gfp(trial, p) > current.shape[0]:
            current = trial
            chosen_ids.append(h)
            chosen_vecs.append(w)
        if current.shape[0] == d:
            break
    return OrbitSpan(spans=current.shape[0] == d,
                     basis_elements=tuple(chosen_ids),
                     basis_vectors=tuple(chosen_vecs))


@dataclass(frozen=True)
class TranslateDecomposition:
    elements: tuple[int, ...]  # group element ids whose translates sum to the target
    bound: int                 # max over the whole space of the minimal length


def translate_decomposition(action: GModuleAction, v: Sequence[int], w: Sequence[int],
                            *, caps: Caps = DEFAULT_CAPS) -> TranslateDecomposition:
    """Minimal sum of translates of v equal to w, by BFS over partial sums.

    Ties break toward smaller group element ids.  Also reports the global
    bound: the largest minimal length over all of the space.
    """
    p, d = action.prime, action.dim
    if p**d > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, p**d)
    span = orbit_span_check(action, v)
    if not span.spans:
        raise ValidationError("translates of v do not span the space")
    translates = [action.translate(v, h) for h in range(action.group.order)]
    zero = tuple([0] * d)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {zero: None}
    frontier = [zero]
    depth = 0
    max_depth = 0
    target = tuple(int(x) % p for x in w)
    while frontier:
        next_frontier = []
        for state in frontier:
            arr = np.asarray(state, dtype=np.int64)
            for h, t in enumerate(translates):
                new = tuple(int(x) for x in (arr + np.asarray(t, dtype=np.int64)) % p)
                if new not in parent:
                    parent[new] = (state, h)
                    next_frontier.append(new)
        if next_frontier:
            depth += 1
            max_depth = depth
        frontier = next_frontier
    if target not in parent:
        raise GroupLabError("spanning translates failed to reach a vector")
    path = []
    cur = target
    while parent[cur] is not None:
        prev, h = parent[cur]
        path.append(h)
        cur = prev
    return TranslateDecomposition(elements=tuple(sorted(path)), bound=max_depth)


@dataclass(frozen=True)
class IllDefinedWitness:
    """Two representations of the same element whose products differ.

    `annihilator_coeffs` represents zero (its translate sum vanishes), yet
    left-multiplying by `multiplier` yields a nonzero value, so products
    would depend on the chosen representation.
    """

    annihilator_coeffs: tuple[int, ...]
    multiplier: int
    product_value: tuple[int, ...]


class ModuleRing:
    """The quotient ring on coordinates over a chosen translate basis.

    Elements are ids encoding GF(p) coordinates little-endian; id 0 is the
    zero vector and the designated generator v is the multiplicative unit.
    """

    def __init__(self, action: GModuleAction, v: tuple[int, ...],
                 basis_elements: tuple[int, ...], basis: np.ndarray,
                 structure: np.ndarray):
        self.action = action
        self.v = v
        self.basis_elements = basis_elements
        self._basis = basis           # d x d, rows are basis translate vectors
        self._basis_inv = inv_gfp(basis, action.prime)
        self._structure = structure   # d x d x d: coords of v^(h_i h_j)
        self.p = action.prime
        self.dim = action.dim
        self.size = action.prime ** action.dim
        self.zero = 0
        self.one = self.from_vector(v)

    def coords(self, eid: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.dim):
            out[i] = eid % self.p
            eid //= self.p
        return out

    def element_id(self, coords: Sequence[int]) -> int:
        out = 0
        for c in reversed(list(coords)):
            out = out * self.p + int(c) % self.p
        return out

    def to_vector(self, eid: int) -> tuple[int, ...]:
        vec = (self.coords(eid) @ self._basis) % self.p
        return tuple(int(x) for x in vec)

    def from_vector(self, vec: Sequence[int]) -> int:
        coords = (np.asarray(vec, dtype=np.int64) @ self._basis_inv) % self.p
        return self.element_id(coords)

    def add(self, a: int, b: int) -> int:
        return self.element_id((self.coords(a) + self.coords(b)) % self.p)

    def mul(self, a: int, b: int) -> int:
        ca, cb = self.coords(a), self.coords(b)
        out = np.einsum("i,j,ijk->k", ca, cb, self._structure) % self.p
        return self.element_id(out)

    def is_commutative(self) -> bool:
        s = self._structure
        return bool(np.array_equal(s, np.swapaxes(s, 0, 1)))

    def to_algebra(self, *, name: str | None = None, caps: Caps = DEFAULT_CAPS) -> FiniteCommutativeAlgebra:
        if not self.is_commutative():
            raise ValidationError("ring is not commutative")
        if self.size > caps.materialized_order:
            raise CapExceeded("materialized_order", caps.materialized_order, self.size)
        add = np.zeros((self.size, self.size), dtype=np.int32)
        mul = np.zeros((self.size, self.size), dtype=np.int32)
        for a in range(self.size):
            for b in range(a, self.size):
                s = self.add(a, b)
                m = self.mul(a, b)
                add[a, b] = add[b, a] = s
                mul[a, b] = mul[b, a] = m
        return FiniteCommutativeAlgebra(add, mul, char=self.p, one_id=self.one,
                                        name=name or "module-ring")


@dataclass(frozen=True)
class RingConstruction:
    well_defined: bool
    ring: ModuleRing | None
    witness: IllDefinedWitness | None
    translate_bound: int


def ring_construct(action: GModuleAction, v: Sequence[int],
                   *, caps: Caps = DEFAULT_CAPS) -> RingConstruction:
    """Quotient the group algebra by the annihilator of v, if two-sided.

    The annihilator is always a right ideal; the left check is exhaustive
    over a kernel basis.  On failure the first offending (kernel element,
    multiplier) pair becomes the witness.  On success the product is
    verified against the translate-sum formula on every pair of elements
    (or a deterministic stride of pairs for large spaces).
    """
    p, d = action.prime, action.dim
    vt = tuple(int(x) % p for x in v)
    span = orbit_span_check(action, vt)
    if not span.spans:
        raise ValidationError("translates of v do not span the space")
    n = action.group.order
    translate_rows = np.array([action.translate(vt, h) for h in range(n)], dtype=np.int64)
    kernel = nullspace_gfp(translate_rows.T, p)  # rows c with c @ translate_rows == 0

    def left_shift(coeffs: np.ndarray, h: int) -> np.ndarray:
        # h * (sum c_g g) has coefficient c_g at position h*g
        out = np.zeros(n, dtype=np.int64)
        for gidx in range(n):
            out[action.group.mul(h, gidx)] = coeffs[gidx]
        return out

    for row in kernel:
        for h in range(n):
            shifted = left_shift(row, h)
            value = (shifted @ translate_rows) % p
            if value.any():
                return RingConstruction(
                    well_defined=False, ring=None,
                    witness=IllDefinedWitness(
                        annihilator_coeffs=tuple(int(x) for x in row),
                        multiplier=h,
                        product_value=tuple(int(x) for x in value),
                    ),
                    translate_bound=translate_decomposition(action, vt, vt, caps=caps).bound,
                )
        # the right check is automatic; assert it on the first basis row anyway
    for row in kernel[:1]:
        for h in range(n):
            out = np.zeros(n, dtype=np.int64)
            for gidx in range(n):
                out[action.group.mul(gidx, h)] = row[gidx]
            if ((out @ translate_rows) % p).any():
                raise GroupLabError("annihilator is not a right ideal; action tables broken")

    basis = np.array(span.basis_vectors, dtype=np.int64)
    basis_inv = inv_gfp(basis, p)
    structure = np.zeros((d, d, d), dtype=np.int64)
    for i, hi in enumerate(span.basis_elements):
        for j, hj in enumerate(span.basis_elements):
            prod_vec = np.asarray(action.translate(vt, action.group.mul(hi, hj)), dtype=np.int64)
            structure[i, j] = (prod_vec @ basis_inv) % p
    ring = ModuleRing(action, vt, span.basis_elements, basis, structure)

    decomp = translate_decomposition(action, vt, vt, caps=caps)
    _verify_against_translate_formula(ring, action, vt, caps=caps)
    return RingConstruction(well_defined=True, ring=ring, witness=None,
                            translate_bound=decomp.bound)


def _verify_against_translate_formula(ring: ModuleRing, action: GModuleAction,
                                      v: tuple[int, ...], *, caps: Caps) -> None:
    """Cross-check ring products against sums over translate decompositions."""
    p = action.prime
    size = ring.size
    stride = 1 if size <= 64 else max(1, size // 32)
    sample = list(range(0, size, stride))
    decomps = {}
    for eid in sample:
        vec = ring.to_vector(eid)
        decomps[eid] = translate_decomposition(action, v, vec, caps=caps).elements
    for a in sample:
        for b in sample:
            total = np.zeros(action.dim, dtype=np.int64)
            for hi in decomps[a]:
                for hj in decomps[b]:
                    total = (total + np.asarray(
                        action.translate(v, action.group.mul(hi, hj)), dtype=np.int64)) % p
            expected = ring.from_vector(tuple(int(x) for x in total))
            if ring.mul(a, b) != expected:
                raise GroupLabError("ring product disagrees with the translate-sum formula")


def nilpotent_free_check(ring: ModuleRing | FiniteCommutativeAlgebra,
                         *, caps: Caps = DEFAULT_CAPS) -> tuple[bool, int | None]:
    """Exhaustive nilpotence scan via repeated squaring; returns (ok, witness id)."""
    if isinstance(ring, FiniteCommutativeAlgebra):
        size = ring.size
        if size > caps.materialized_order:
            raise CapExceeded("materialized_order", caps.materialized_order, size)
        from .algebras import find_nilpotent

        witness = find_nilpotent(size, ring.mul_table)
        return witness is None, witness
    size = ring.size
    if size > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, size)
    p, d = ring.p, ring.dim
    ids = np.arange(size, dtype=np.int64)
    coords = np.zeros((size, d), dtype=np.int64)
    rem = ids.copy()
    for i in range(d):
        coords[:, i] = rem % p
        rem //= p
    radix = p ** np.arange(d, dtype=np.int64)
    cur = coords
    steps = max(1, int(size).bit_length())
    for _ in range(steps):
        cur = np.einsum("ni,nj,ijk->nk", cur, cur, ring._structure) % p
    flat = cur @ radix
    hits = np.flatnonzero((flat == 0) & (ids != 0))
    if hits.size:
        return False, int(hits[0])
    return True, None


def permutation_module_action(group: FiniteGroup, p: int,
                              *, caps: Caps = DEFAULT_CAPS) -> GModuleAction:
    """The permutation module over GF(p) of a group with a permutation presentation.

    Row vectors are permuted by pullback, (v^x)_j = v_(pi_x(j)), which makes
    the matrix assignment a homomorphism for the stored composition order.
    """
    if group.perm_generators is None:
        raise ValidationError("group has no permutation presentation")
    degree = group.perm_generators.degree
    mats = {}
    for eid in group.perm_generators.element_ids:
        perm = group.permutation_of(eid)
        m = np.zeros((degree, degree), dtype=np.int64)
        for j in range(degree):
            m[perm[j], j] = 1
        mats[eid] = m
    return action_from_matrices(group, p, degree, mats, caps=caps)


def sum_zero_action(group: FiniteGroup, p: int, *, caps: Caps = DEFAULT_CAPS) -> GModuleAction:
    """Restriction of the permutation module to the sum-zero subspace.

    Basis: f_i = e_i - e_(i+1); the classic (degree-1)-dimensional summand.
    """
    from .linalg import solve_gfp

    full = permutation_module_action(group, p, caps=caps)
    degree = full.dim
    if degree < 2:
        raise ValidationError("need degree at least 2")
    basis = np.zeros((degree - 1, degree), dtype=np.int64)
    for i in range(degree - 1):
        basis[i, i] = 1
        basis[i, i + 1] = (p - 1) % p
    mats = {}
    for eid in range(group.order):
        rows = []
        for i in range(degree - 1):
            image = (basis[i] @ full.matrices[eid]) % p
            coeffs = solve_gfp(basis, image, p)
            if coeffs is None:
                raise GroupLabError("sum-zero subspace is not invariant")
            rows.append(coeffs)
        mats[eid] = np.array(rows, dtype=np.int64)
    return action_from_matrices(group, p, degree - 1, mats, caps=caps)


def mr_factor_sizes_for_report(ring: ModuleRing, nilpotent_free: bool,
                               *, caps: Caps = DEFAULT_CAPS) -> str | None:
    """Field-factor sizes of a commutative nilpotent-free ring, for reports."""
    if not nilpotent_free or not ring.is_commutative():
        return None
    from .algebras import mr_decompose

    decomp = mr_decompose(ring.to_algebra(caps=caps), caps=caps)
    return ",".join(str(f.field.size) for f in decomp.factors)


@dataclass(frozen=True)
class FaithfulnessReport:
    kernel_ids: tuple[int, ...]
    faithful: bool
    index_histogram: tuple[tuple[int, int], ...]  # (stabilizer index, vector count)
    regular_vector: tuple[int, ...] | None        # first v with trivial stabilizer


def faithfulness_report(action: GModuleAction, *, caps: Caps = DEFAULT_CAPS) -> FaithfulnessReport:
    """Kernel of the action and per-vector stabilizer indices."""
    p, d = action.prime, action.dim
    if p**d > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, p**d)
    n = action.group.order
    eye = np.eye(d, dtype=np.int64)
    kernel = tuple(h for h in range(n) if np.array_equal(action.matrices[h] % p, eye))
    vectors = np.array(action.vectors(), dtype=np.int64)
    stab_counts = np.zeros(len(vectors), dtype=np.int64)
    for h in range(n):
        moved = (vectors @ action.matrices[h]) % p
        stab_counts += (moved == vectors).all(axis=1)
    indices = n // stab_counts
    histogram: dict[int, int] = {}
    for idx in indices:
        histogram[int(idx)] = histogram.get(int(idx), 0) + 1
    regular = None
    hits = np.flatnonzero(indices == n)
    if hits.size:
        regular = tuple(int(x) for x in vectors[hits[0]])
    return FaithfulnessReport(
        kernel_ids=kernel,
        faithful=kernel == (0,),
        index_histogram=tuple(sorted(histogram.items())),
        regular_vector=regular,
    )
