"""Finite groups as immutable Cayley tables with 0-based element ids.

Element 0 is always the identity.  Every canonical order used anywhere in
the package is id-lexicographic, so repeated runs produce identical output
regardless of platform or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, GroupLabError, ValidationError

__all__ = [
    "FiniteGroup",
    "GroupHom",
    "PermGenerators",
    "Series",
    "Subgroup",
    "build_group",
    "center",
    "centralizer",
    "commutator_subgroup",
    "commuting_pair_count",
    "conjugacy_classes",
    "core",
    "cyclic_group",
    "direct_power",
    "direct_product",
    "is_nilpotent",
    "is_perfect",
    "is_soluble",
    "normal_closure",
    "quotient",
    "series",
    "subgroup_closure",
]


def _closure_mask(table: np.ndarray, gens: Sequence[int], start: Sequence[int] = (0,)) -> np.ndarray:
    """Boolean mask of the closure of `start` under right multiplication by `gens`."""
    n = table.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[list(start)] = True
    frontier = np.unique(np.fromiter(start, dtype=np.int32))
    garr = np.unique(np.fromiter(gens, dtype=np.int32)) if len(gens) else np.empty(0, np.int32)
    while frontier.size and garr.size:
        prods = np.unique(table[np.ix_(frontier, garr)])
        new = prods[~seen[prods]]
        seen[new] = True
        frontier = new
    return seen


def _greedy_generators(table: np.ndarray) -> list[int]:
    """Small generating set, chosen by ascending element id."""
    n = table.shape[0]
    gens: list[int] = []
    covered = _closure_mask(table, gens)
    while not covered.all():
        gens.append(int(np.flatnonzero(~covered)[0]))
        covered = _closure_mask(table, gens)
    return gens


def _light_associativity(table: np.ndarray) -> None:
    # Light's test: associativity on a generating set proves it everywhere.
    for g in _greedy_generators(table):
        lhs = table[table[:, g], :]      # (x g) y
        rhs = table[:, table[g, :]]      # x (g y)
        if not np.array_equal(lhs, rhs):
            raise ValidationError("multiplication table is not associative")


@dataclass(frozen=True)
class PermGenerators:
    """Permutation generators a group was closed from, with their element ids."""

    degree: int
    perms: tuple[tuple[int, ...], ...]
    element_ids: tuple[int, ...]


class FiniteGroup:
    """A finite group given by its full multiplication table.

    `table[a, b]` is the id of the product a*b.  The table and inverse array
    are read-only numpy arrays; instances are immutable and safe to share.
    """

    def __init__(
        self,
        table: np.ndarray | Sequence[Sequence[int]],
        *,
        name: str = "G",
        perm_generators: PermGenerators | None = None,
        words: tuple[np.ndarray, np.ndarray] | None = None,
        validate: str = "full",
        caps: Caps = DEFAULT_CAPS,
    ) -> None:
        arr = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("multiplication table must be square")
        n = arr.shape[0]
        if n == 0:
            raise ValidationError("a group has at least one element")
        if n > caps.order:
            raise CapExceeded("order", caps.order, n)
        if validate not in ("full", "basic"):
            raise ValueError(f"unknown validation level {validate!r}")
        if arr.min() < 0 or arr.max() >= n:
            raise ValidationError("table entry out of range")
        ids = np.arange(n, dtype=np.int32)
        if not (np.array_equal(arr[0], ids) and np.array_equal(arr[:, 0], ids)):
            raise ValidationError("element 0 must act as the identity")
        if not (np.array_equal(np.sort(arr, axis=1), np.broadcast_to(ids, arr.shape))
                and np.array_equal(np.sort(arr, axis=0), np.broadcast_to(ids[:, None], arr.shape))):
            raise ValidationError("table rows/columns are not permutations")
        inverse = np.argmax(arr == 0, axis=1).astype(np.int32)
        if not np.all(arr[inverse, ids] == 0):
            raise ValidationError("an element lacks a two-sided inverse")
        if validate == "full":
            _light_associativity(arr)
        arr.setflags(write=False)
        inverse.setflags(write=False)
        self.name = name
        self.table = arr
        self.inverse = inverse
        self.perm_generators = perm_generators
        self._words = words
        self._classes: tuple[tuple[int, ...], ...] | None = None
        self._abelian: bool | None = None

    # -- basic queries ----------------------------------------------------

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conjugate(self, g: int, h: int) -> int:
        """g^h = h^-1 g h."""
        return int(self.table[self.table[self.inverse[h], g], h])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[t[self.inverse[a], self.inverse[b]], a], b])

    def element_order(self, a: int) -> int:
        x, k = int(a), 1
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self.table, self.table.T))
        return self._abelian

    def exponent(self) -> int:
        e = 1
        for a in self.elements():
            k = self.element_order(a)
            e = e * k // np.gcd(e, k)
        return int(e)

    # -- subgroup helpers --------------------------------------------------

    def subgroup(self, ids: Iterable[int], *, validate: bool = True) -> "Subgroup":
        return Subgroup(self, ids, validate=validate)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,), validate=False)

    def whole_subgroup(self) -> "Subgroup":
        return Subgroup(self, range(self.order), validate=False)

    def permutation_of(self, x: int) -> tuple[int, ...]:
        """Permutation realizing element x, for groups built from generators."""
        if self.perm_generators is None or self._words is None:
            raise ValidationError("group has no permutation presentation")
        parents, genidx = self._words
        chain: list[int] = []
        while x != 0:
            chain.append(int(genidx[x]))
            x = int(parents[x])
        perm = np.arange(self.perm_generators.degree, dtype=np.int32)
        gen_arrays = [np.array(p, dtype=np.int32) for p in self.perm_generators.perms]
        for gi in reversed(chain):
            perm = perm[gen_arrays[gi]]
        return tuple(int(v) for v in perm)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


class Subgroup:
    """A sorted set of element ids closed under the parent's operations."""

    __slots__ = ("group", "ids", "_members")

    def __init__(self, group: FiniteGroup, ids: Iterable[int], *, validate: bool = True):
        sorted_ids = tuple(sorted({int(x) for x in ids}))
        if not sorted_ids:
            raise ValidationError("a subgroup is nonempty")
        self.group = group
        self.ids = sorted_ids
        self._members = frozenset(sorted_ids)
        if validate:
            self._validate()

    def _validate(self) -> None:
        g = self.group
        if self.ids[0] != 0:
            raise ValidationError("subgroup must contain the identity")
        if self.ids[-1] >= g.order:
            raise ValidationError("subgroup id out of range")
        arr = np.array(self.ids, dtype=np.int32)
        if not np.isin(g.inverse[arr], arr).all():
            raise ValidationError("subgroup not closed under inversion")
        if not np.isin(g.table[np.ix_(arr, arr)], arr).all():
            raise ValidationError("subgroup not closed under multiplication")
        if g.order % len(self.ids) != 0:
            raise GroupLabError("Lagrange violation, table is inconsistent")

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, x: int) -> bool:
        return x in self._members

    def __iter__(self):
        return iter(self.ids)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.ids == self.ids
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.ids))

    @property
    def index(self) -> int:
        return self.group.order // len(self.ids)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return self._members.issuperset(other._members)

    def conjugate_by(self, g: int) -> "Subgroup":
        t, inv = self.group.table, self.group.inverse
        arr = np.array(self.ids, dtype=np.int32)
        conj = t[t[inv[g], arr], g]
        return Subgroup(self.group, conj.tolist(), validate=False)

    def is_normal(self) -> bool:
        # Normal iff a union of conjugacy classes.
        for cls in conjugacy_classes(self.group):
            hits = sum(1 for c in cls if c in self._members)
            if hits not in (0, len(cls)):
                return False
        return True

    def as_group(self, *, name: str | None = None) -> tuple[FiniteGroup, "GroupHom"]:
        """Reindexed copy of this subgroup plus the embedding hom into the parent."""
        arr = np.array(self.ids, dtype=np.int32)
        local = np.full(self.group.order, -1, dtype=np.int32)
        local[arr] = np.arange(len(arr), dtype=np.int32)
        table = local[self.group.table[np.ix_(arr, arr)]]
        grp = FiniteGroup(table, name=name or f"{self.group.name}-sub{len(arr)}", validate="basic")
        embed = GroupHom(grp, self.group, arr, validate=False)
        return grp, embed

    def __repr__(self) -> str:
        return f"Subgroup(order={len(self.ids)} of {self.group.name})"


class GroupHom:
    """A homomorphism stored as an id-to-id mapping array."""

    __slots__ = ("source", "target", "mapping")

    def __init__(
        self,
        source: FiniteGroup,
        target: FiniteGroup,
        mapping: np.ndarray | Sequence[int],
        *,
        validate: bool = True,
    ):
        arr = np.ascontiguousarray(np.asarray(mapping, dtype=np.int32))
        if arr.shape != (source.order,):
            raise ValidationError("homomorphism mapping has wrong length")
        if arr.min() < 0 or arr.max() >= target.order:
            raise ValidationError("homomorphism image out of range")
        if validate:
            if arr[0] != 0:
                raise ValidationError("homomorphism must fix the identity")
            lhs = arr[source.table]
            rhs = target.table[arr[:, None], arr[None, :]]
            if not np.array_equal(lhs, rhs):
                raise ValidationError("mapping is not a homomorphism")
        arr.setflags(write=False)
        self.source = source
        self.target = target
        self.mapping = arr

    def __call__(self, x: int) -> int:
        return int(self.mapping[x])

    def image_ids(self) -> np.ndarray:
        return np.unique(self.mapping)

    def image(self) -> Subgroup:
        return Subgroup(self.target, self.image_ids().tolist(), validate=False)

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.mapping == 0).tolist(), validate=False)

    def is_surjective(self) -> bool:
        return self.image_ids().size == self.target.order

    def is_injective(self) -> bool:
        return np.unique(self.mapping).size == self.source.order

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self o inner, mapping inner.source into self.target."""
        if inner.target is not self.source:
            raise ValidationError("homomorphisms do not compose")
        return GroupHom(inner.source, self.target, self.mapping[inner.mapping], validate=False)

    def map_subgroup(self, sub: Subgroup) -> Subgroup:
        if sub.group is not self.source:
            raise ValidationError("subgroup belongs to a different group")
        ids = np.unique(self.mapping[np.array(sub.ids, dtype=np.int32)])
        return Subgroup(self.target, ids.tolist(), validate=False)

    def __repr__(self) -> str:
        return f"GroupHom({self.source.name} -> {self.target.name})"


@dataclass(frozen=True)
class Series:
    """A stabilized descending series of subgroups; terms[0] is the whole group."""

    kind: str  # "derived" | "lower_central"
    terms: tuple[Subgroup, ...]


# -- construction ----------------------------------------------------------


def _perm_closure(
    gen_arrays: list[np.ndarray], degree: int, cap: int
) -> tuple[list[np.ndarray], dict[bytes, int], list[int], list[int]]:
    """BFS closure of permutations under right multiplication by the generators.

    Composition convention: (p * q)(x) = p(q(x)), so right-multiplying the
    permutation array p by generator q is p[q].
    """
    ident = np.arange(degree, dtype=np.int32)
    perms = [ident]
    index: dict[bytes, int] = {ident.tobytes(): 0}
    parents = [-1]
    genidx = [-1]
    qi = 0
    while qi < len(perms):
        cur = perms[qi]
        for gi, gp in enumerate(gen_arrays):
            new = cur[gp]
            key = new.tobytes()
            if key not in index:
                if len(perms) >= cap:
                    raise CapExceeded("order", cap, len(perms) + 1, "permutation closure")
                index[key] = len(perms)
                perms.append(new)
                parents.append(qi)
                genidx.append(gi)
        qi += 1
    return perms, index, parents, genidx


def _table_from_perm_closure(
    perms: list[np.ndarray],
    index: dict[bytes, int],
    parents: list[int],
    genidx: list[int],
    gen_arrays: list[np.ndarray],
) -> tuple[np.ndarray, list[int]]:
    """Cayley table for a permutation closure, built column by column."""
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n, dtype=np.int32)
    gen_element_ids = [index[g.tobytes()] for g in gen_arrays]
    gen_cols: list[np.ndarray] = []
    for g in gen_arrays:
        col = np.fromiter((index[(perms[i][g]).tobytes()] for i in range(n)), dtype=np.int32, count=n)
        gen_cols.append(col)
    for j in range(1, n):
        p, gi = parents[j], genidx[j]
        # column for j = parent * gen: i*j = (i*parent)*gen
        table[:, j] = gen_cols[gi][table[:, p]]
    return table, gen_element_ids


def build_group(
    *,
    table: Sequence[Sequence[int]] | np.ndarray | None = None,
    generators: Sequence[Sequence[int]] | None = None,
    degree: int | None = None,
    name: str = "G",
    caps: Caps = DEFAULT_CAPS,
) -> FiniteGroup:
    """Build a validated group from a full table or permutation generators.

    Generator input is closed by breadth-first product saturation; element
    ids follow discovery order with the identity first.
    """
    if (table is None) == (generators is None):
        raise ValidationError("provide exactly one of table= or generators=")
    if table is not None:
        return FiniteGroup(table, name=name, validate="full", caps=caps)
    if degree is None:
        raise ValidationError("generator input requires degree=")
    if degree < 1 or degree > caps.order:
        raise ValidationError(f"degree must be in 1..{caps.order}")
    gen_arrays = []
    for images in generators or ():
        arr = np.asarray(list(images), dtype=np.int32)
        if arr.shape != (degree,) or not np.array_equal(np.sort(arr), np.arange(degree)):
            raise ValidationError(f"not a permutation of {degree} points: {list(images)!r}")
        gen_arrays.append(arr)
    perms, index, parents, genidx = _perm_closure(gen_arrays, degree, caps.order)
    tbl, gen_ids = _table_from_perm_closure(perms, index, parents, genidx, gen_arrays)
    presentation = PermGenerators(
        degree=degree,
        perms=tuple(tuple(int(v) for v in g) for g in gen_arrays),
        element_ids=tuple(gen_ids),
    )
    words = (np.array(parents, dtype=np.int32), np.array(genidx, dtype=np.int32))
    return FiniteGroup(
        tbl, name=name, perm_generators=presentation, words=words, validate="basic", caps=caps
    )


def cyclic_group(n: int, *, name: str | None = None, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic group order must be positive")
    ids = np.arange(n, dtype=np.int32)
    table = (ids[:, None] + ids[None, :]) % n
    return FiniteGroup(table.astype(np.int32), name=name or f"Z{n}", validate="basic", caps=caps)


def direct_product(a: FiniteGroup, b: FiniteGroup, *, name: str | None = None,
                   caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Direct product with ids encoded as x*|b| + y (first factor most significant)."""
    na, nb = a.order, b.order
    if na * nb > caps.order:
        raise CapExceeded("order", caps.order, na * nb)
    t = a.table[:, None, :, None].astype(np.int32) * nb + b.table[None, :, None, :]
    table = t.reshape(na * nb, na * nb)
    return FiniteGroup(table, name=name or f"{a.name}x{b.name}", validate="basic", caps=caps)


def direct_power(p: FiniteGroup, m: int, *, name: str | None = None,
                 caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Direct power P^m; coordinate 0 is the most significant digit of the id."""
    if m < 0:
        raise ValidationError("power must be nonnegative")
    if p.order ** m > caps.order:
        raise CapExceeded("order", caps.order, p.order ** m)
    if m == 0:
        return FiniteGroup([[0]], name=name or f"{p.name}^0", validate="basic", caps=caps)
    grp = p
    for _ in range(m - 1):
        grp = direct_product(grp, p, caps=caps)
    return FiniteGroup(grp.table, name=name or f"{p.name}^{m}", validate="basic", caps=caps)


# -- structural queries ------------------------------------------------------


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup generated by the given element ids."""
    mask = _closure_mask(g.table, list(gens))
    return Subgroup(g, np.flatnonzero(mask).tolist(), validate=False)


def conjugacy_classes(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Orbits of conjugation, ordered by minimal representative."""
    if g._classes is not None:
        return g._classes
    n = g.order
    t, inv = g.table, g.inverse
    all_ids = np.arange(n, dtype=np.int32)
    seen = np.zeros(n, dtype=bool)
    classes: list[tuple[int, ...]] = []
    for x in range(n):
        if seen[x]:
            continue
        orbit = np.unique(t[t[inv, x], all_ids])
        seen[orbit] = True
        classes.append(tuple(int(v) for v in orbit))
    g._classes = tuple(classes)
    return g._classes


def commuting_pair_count(g: FiniteGroup) -> int:
    """Exact |{(x, y) : xy = yx}| with a class-counting cross-check."""
    count = int((g.table == g.table.T).sum())
    expected = g.order * len(conjugacy_classes(g))
    if count != expected:
        raise GroupLabError("commuting-pair count disagrees with class count")
    return count


def centralizer(g: FiniteGroup, ids: Iterable[int]) -> Subgroup:
    """Elements commuting with every element of `ids`; the whole group if empty."""
    mask = np.ones(g.order, dtype=bool)
    for s in ids:
        mask &= g.table[:, s] == g.table[s, :]
    return Subgroup(g, np.flatnonzero(mask).tolist(), validate=False)


def center(g: FiniteGroup) -> Subgroup:
    return centralizer(g, g.elements())


def commutator_subgroup(a: Subgroup, b: Subgroup) -> Subgroup:
    """Subgroup generated by all commutators [x, y], x in a, y in b."""
    if a.group is not b.group:
        raise ValidationError("subgroups live in different groups")
    g = a.group
    t, inv = g.table, g.inverse
    barr = np.array(b.ids, dtype=np.int32)
    gens: set[int] = set()
    for x in a.ids:
        # [x, y] = x^-1 y^-1 x y, vectorized over y
        c = t[t[t[inv[x], inv[barr]], x], barr]
        gens.update(int(v) for v in np.unique(c))
    return subgroup_closure(g, gens)


def series(g: FiniteGroup, kind: str) -> Series:
    """Derived or lower central series, stopped at the first repeated term."""
    if kind not in ("derived", "lower_central"):
        raise ValidationError(f"unknown series kind {kind!r}")
    whole = g.whole_subgroup()
    terms = [whole]
    while True:
        cur = terms[-1]
        left = cur if kind == "derived" else whole
        nxt = commutator_subgroup(left, cur)
        if nxt == cur:
            break
        terms.append(nxt)
        if len(nxt) == 1:
            break
    return Series(kind, tuple(terms))


def is_perfect(g: FiniteGroup) -> bool:
    whole = g.whole_subgroup()
    return commutator_subgroup(whole, whole) == whole


def is_nilpotent(g: FiniteGroup) -> bool:
    return len(series(g, "lower_central").terms[-1]) == 1


def is_soluble(g: FiniteGroup) -> bool:
    return len(series(g, "derived").terms[-1]) == 1


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Quotient by a normal subgroup; coset ids follow minimal representatives."""
    if n.group is not g:
        raise ValidationError("subgroup belongs to a different group")
    if not n.is_normal():
        raise ValidationError("subgroup is not normal")
    arr = np.array(n.ids, dtype=np.int32)
    rep = g.table[:, arr].min(axis=1)
    reps = np.unique(rep)
    idx_of = np.full(g.order, -1, dtype=np.int32)
    idx_of[reps] = np.arange(reps.size, dtype=np.int32)
    proj = idx_of[rep]
    qtable = proj[g.table[np.ix_(reps, reps)]]
    q = FiniteGroup(qtable, name=f"{g.name}/{len(n)}", validate="basic")
    return q, GroupHom(g, q, proj, validate=False)


def core(g: FiniteGroup, h: Subgroup) -> Subgroup:
    """Largest normal subgroup of g inside h (the intersection of all conjugates)."""
    if h.group is not g:
        raise ValidationError("subgroup belongs to a different group")
    ids: list[int] = []
    for cls in conjugacy_classes(g):
        if all(c in h for c in cls):
            ids.extend(cls)
    return Subgroup(g, ids, validate=False)


def normal_closure(g: FiniteGroup, x: int) -> Subgroup:
    """Smallest normal subgroup containing x."""
    t, inv = g.table, g.inverse
    all_ids = np.arange(g.order, dtype=np.int32)
    cls = np.unique(t[t[inv, x], all_ids])
    return subgroup_closure(g, cls.tolist())
