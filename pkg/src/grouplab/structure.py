"""Subgroup enumeration and the searches built on top of it.

All results come back in a canonical order: subgroups by (size, element
tuple), witnesses by ascending id.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, GroupLabError, ValidationError
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    _closure_mask,
    _greedy_generators,
    conjugacy_classes,
    is_nilpotent,
    subgroup_closure,
)

__all__ = [
    "AutomorphismReport",
    "SpreadReport",
    "SpreadWitness",
    "automorphism_group",
    "conjugate_spread",
    "enumerate_normal_subgroups",
    "enumerate_subgroups",
    "is_simple_nonabelian",
    "minimal_generator_count",
    "prufer_rank",
    "sylow_subgroup",
]


def _canonical(subs: dict[tuple[int, ...], Subgroup]) -> list[Subgroup]:
    return [subs[key] for key in sorted(subs, key=lambda ids: (len(ids), ids))]


def enumerate_subgroups(
    g: FiniteGroup, *, max_count: int | None = None, caps: Caps = DEFAULT_CAPS
) -> list[Subgroup]:
    """All subgroups, by cyclic extension: grow known subgroups one generator at a time."""
    if g.order > caps.subgroup_order:
        raise CapExceeded("subgroup_order", caps.subgroup_order, g.order)
    limit = max_count if max_count is not None else caps.subgroup_count
    found: dict[tuple[int, ...], Subgroup] = {}
    gens_of: dict[tuple[int, ...], tuple[int, ...]] = {}

    def add(gen_ids: tuple[int, ...]) -> tuple[int, ...] | None:
        sub = subgroup_closure(g, gen_ids)
        if sub.ids in found:
            return None
        if len(found) >= limit:
            raise CapExceeded("subgroup_count", limit, len(found) + 1)
        found[sub.ids] = sub
        gens_of[sub.ids] = gen_ids
        return sub.ids

    add(())
    for x in range(1, g.order):
        add((x,))
    frontier = list(found)
    while frontier:
        new_frontier = []
        for key in frontier:
            base_gens = gens_of[key]
            members = found[key]._members
            for x in range(1, g.order):
                if x in members:
                    continue
                added = add(base_gens + (x,))
                if added is not None:
                    new_frontier.append(added)
        frontier = new_frontier
    return _canonical(found)


def enumerate_normal_subgroups(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> list[Subgroup]:
    """All normal subgroups, as the join-closure of conjugacy-class closures."""
    if g.order > caps.order:
        raise CapExceeded("order", caps.order, g.order)
    limit = caps.normal_subgroup_count
    found: dict[tuple[int, ...], Subgroup] = {}

    def add(sub: Subgroup) -> bool:
        if sub.ids in found:
            return False
        if len(found) >= limit:
            raise CapExceeded("normal_subgroup_count", limit, len(found) + 1)
        found[sub.ids] = sub
        return True

    add(g.trivial_subgroup())
    for cls in conjugacy_classes(g):
        add(subgroup_closure(g, cls))
    changed = True
    while changed:
        changed = False
        current = list(found.values())
        for a, b in itertools.combinations(current, 2):
            if a.contains_subgroup(b) or b.contains_subgroup(a):
                continue
            join = subgroup_closure(g, a.ids + b.ids)
            if add(join):
                changed = True
    return _canonical(found)


def is_simple_nonabelian(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> bool:
    if g.is_abelian or g.order == 1:
        return False
    return len(enumerate_normal_subgroups(g, caps=caps)) == 2


@dataclass(frozen=True)
class SpreadWitness:
    element: int        # the generating element g
    depth: int          # products of conjugates of g^(+-1) needed to cover <g>^G
    worst: int          # smallest element id only reached at that depth


@dataclass(frozen=True)
class SpreadReport:
    m: int
    witnesses: tuple[SpreadWitness, ...]


def conjugate_spread(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> SpreadReport:
    """Least m such that every element of every <x>^G is a product of at most
    m conjugates of x or x^-1.  The empty product covers the identity."""
    if g.order > caps.spread_order:
        raise CapExceeded("spread_order", caps.spread_order, g.order)
    t, inv = g.table, g.inverse
    all_ids = np.arange(g.order, dtype=np.int32)
    witnesses = []
    overall = 0
    for x in range(g.order):
        cls_x = np.unique(t[t[inv, x], all_ids])
        cls_xinv = np.unique(t[t[inv, int(inv[x])], all_ids])
        gens = np.unique(np.concatenate([cls_x, cls_xinv]))
        depth = np.full(g.order, -1, dtype=np.int32)
        depth[0] = 0
        frontier = np.array([0], dtype=np.int32)
        d = 0
        while frontier.size:
            prods = np.unique(t[np.ix_(frontier, gens)])
            new = prods[depth[prods] < 0]
            d += 1
            depth[new] = d
            frontier = new
        reached = depth >= 0
        m_x = int(depth[reached].max())
        worst = int(np.flatnonzero(reached & (depth == m_x))[0])
        witnesses.append(SpreadWitness(element=x, depth=m_x, worst=worst))
        overall = max(overall, m_x)
    return SpreadReport(m=overall, witnesses=tuple(witnesses))


def minimal_generator_count(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> int:
    """Smallest k such that some k elements generate g.

    Searches k = 1, 2, ... exhaustively; the first chosen generator ranges
    only over conjugacy-class representatives (conjugating a generating set
    yields a generating set).
    """
    n = g.order
    if n == 1:
        return 0
    if n > caps.subgroup_order:
        raise CapExceeded("subgroup_order", caps.subgroup_order, n)
    reps = [cls[0] for cls in conjugacy_classes(g) if cls[0] != 0]
    rest = list(range(1, n))
    k = 1
    while True:
        for first in reps:
            others = [x for x in rest if x != first]
            for combo in itertools.combinations(others, k - 1):
                if _closure_mask(g.table, (first,) + combo).all():
                    return k
        k += 1
        if k > n.bit_length():
            raise GroupLabError("generator search exceeded the log2 bound")


def prufer_rank(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> int:
    """Max over subgroups of the minimal generating-set size; 0 for the trivial group."""
    best = 0
    for sub in enumerate_subgroups(g, caps=caps):
        if len(sub) == 1:
            continue
        grp, _ = sub.as_group()
        best = max(best, minimal_generator_count(grp, caps=caps))
    return best


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def sylow_subgroup(g: FiniteGroup, p: int, *, caps: Caps = DEFAULT_CAPS) -> Subgroup:
    """A maximal p-subgroup, grown one element at a time (hence Sylow).

    For nilpotent groups the Sylow subgroup is unique; that uniqueness is
    asserted by a normality check.
    """
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValidationError(f"{p} is not prime")
    gens: tuple[int, ...] = ()
    current = g.trivial_subgroup()
    while True:
        extended = False
        for x in range(1, g.order):
            if x in current:
                continue
            if not _is_p_power(g.element_order(x), p):
                continue
            candidate = subgroup_closure(g, gens + (x,))
            if _is_p_power(len(candidate), p):
                gens = gens + (x,)
                current = candidate
                extended = True
                break
        if not extended:
            break
    if is_nilpotent(g) and not current.is_normal():
        raise GroupLabError("nilpotent group produced a non-normal Sylow subgroup")
    return current


@dataclass(frozen=True)
class AutomorphismReport:
    automorphisms: tuple[GroupHom, ...]
    normal_subgroups: tuple[Subgroup, ...]
    characteristic: tuple[bool, ...]  # aligned with normal_subgroups


def automorphism_group(g: FiniteGroup, *, caps: Caps = DEFAULT_CAPS) -> AutomorphismReport:
    """All automorphisms by backtracking over generator images.

    Candidate images are constrained by element order, and each partial
    assignment must restrict to an isomorphism on the subgroup generated so
    far.  Normal subgroups are tagged characteristic when fixed setwise by
    every automorphism.
    """
    n = g.order
    if n > caps.automorphism_order:
        raise CapExceeded("automorphism_order", caps.automorphism_order, n)
    gens = _greedy_generators(g.table)
    orders = [g.element_order(x) for x in range(n)]

    # Precompute the subgroup chain <gens[:i+1]> with BFS words over it.
    chains: list[np.ndarray] = []
    for i in range(len(gens)):
        chains.append(np.flatnonzero(_closure_mask(g.table, gens[: i + 1])))

    autos: list[np.ndarray] = []

    def build_partial(images: list[int], level: int) -> np.ndarray | None:
        """Map on <gens[:level+1]> determined by the generator images, or None."""
        mapping = np.full(n, -1, dtype=np.int32)
        mapping[0] = 0
        frontier = [0]
        used_gens = gens[: level + 1]
        used_imgs = images
        while frontier:
            new_frontier = []
            for x in frontier:
                for ggen, gimg in zip(used_gens, used_imgs):
                    y = int(g.table[x, ggen])
                    fy = int(g.table[mapping[x], gimg])
                    if mapping[y] == -1:
                        mapping[y] = fy
                        new_frontier.append(y)
                    elif mapping[y] != fy:
                        return None
            frontier = new_frontier
        dom = chains[level]
        vals = mapping[dom]
        if np.unique(vals).size != dom.size:
            return None
        sub = g.table[np.ix_(dom, dom)]
        if not np.array_equal(mapping[sub], g.table[vals[:, None], vals[None, :]]):
            return None
        return mapping

    def search(level: int, images: list[int]) -> None:
        if level == len(gens):
            mapping = np.arange(n, dtype=np.int32) if not gens else build_partial(images, len(gens) - 1)
            if mapping is not None:
                if len(autos) >= caps.automorphism_count:
                    raise CapExceeded("automorphism_count", caps.automorphism_count, len(autos) + 1)
                autos.append(mapping)
            return
        want = orders[gens[level]]
        for b in range(n):
            if orders[b] != want:
                continue
            trial = images + [b]
            if build_partial(trial, level) is None:
                continue
            search(level + 1, trial)

    if not gens:
        autos.append(np.arange(n, dtype=np.int32))
    else:
        search(0, [])
    autos.sort(key=lambda m: tuple(int(v) for v in m))
    homs = tuple(GroupHom(g, g, m, validate=False) for m in autos)

    normals = tuple(enumerate_normal_subgroups(g, caps=caps))
    flags = []
    for sub in normals:
        arr = np.array(sub.ids, dtype=np.int32)
        flags.append(all(np.array_equal(np.unique(m[arr]), arr) for m in autos))
    return AutomorphismReport(automorphisms=homs, normal_subgroups=normals,
                              characteristic=tuple(flags))
