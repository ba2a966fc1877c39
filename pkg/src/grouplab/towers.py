"""Towers of finite groups with surjective connecting maps.

A tower stands in for a profinite completion: levels[i+1] projects onto
levels[i], and every statement about the limit is checked level by level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, ValidationError
from .groups import (
    FiniteGroup,
    GroupHom,
    PermGenerators,
    Subgroup,
    _greedy_generators,
    _perm_closure,
    _table_from_perm_closure,
    commutator_subgroup,
    commuting_pair_count,
    direct_power,
    quotient,
)

__all__ = [
    "ClosureTrace",
    "CommutatorCheckReport",
    "CosetActionSystem",
    "CosetSpace",
    "InverseSystem",
    "QuotientTrace",
    "build_system",
    "closure_trace",
    "commutator_level_check",
    "coset_action_system",
    "cp_sequence",
    "direct_power_system",
    "quotient_trace",
]


class InverseSystem:
    """levels[i+1] --projections[i]--> levels[i]; the top level is levels[-1]."""

    def __init__(self, levels: Sequence[FiniteGroup], projections: Sequence[GroupHom],
                 *, caps: Caps = DEFAULT_CAPS, validate: bool = True):
        levels = list(levels)
        projections = list(projections)
        if not levels:
            raise ValidationError("a tower has at least one level")
        if len(levels) > caps.tower_length:
            raise CapExceeded("tower_length", caps.tower_length, len(levels))
        if len(projections) != len(levels) - 1:
            raise ValidationError("need exactly one projection per adjacent pair")
        if validate:
            for i, hom in enumerate(projections):
                if hom.source is not levels[i + 1] or hom.target is not levels[i]:
                    raise ValidationError(f"projection {i} does not connect its levels")
                if not hom.is_surjective():
                    raise ValidationError(f"projection {i} is not surjective")
        self.levels = tuple(levels)
        self.projections = tuple(projections)

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> FiniteGroup:
        return self.levels[-1]

    def composite(self, from_level: int, to_level: int) -> GroupHom:
        """Composition of stored projections from a higher level down to a lower one."""
        if not 0 <= to_level <= from_level < len(self.levels):
            raise ValidationError("levels out of range")
        mapping = np.arange(self.levels[from_level].order, dtype=np.int32)
        for i in range(from_level - 1, to_level - 1, -1):
            mapping = self.projections[i].mapping[mapping]
        return GroupHom(self.levels[from_level], self.levels[to_level], mapping, validate=False)

    def maps_to(self, level: int) -> GroupHom:
        """Projection from the top level down to `level`."""
        return self.composite(len(self.levels) - 1, level)


def build_system(levels: Sequence[FiniteGroup], projections: Sequence[GroupHom],
                 *, caps: Caps = DEFAULT_CAPS) -> InverseSystem:
    return InverseSystem(levels, projections, caps=caps)


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets of a subgroup, one canonical (minimal-id) representative each."""

    group: FiniteGroup
    subgroup: Subgroup
    reps: tuple[int, ...]

    @classmethod
    def build(cls, subgroup: Subgroup) -> "CosetSpace":
        g = subgroup.group
        arr = np.array(subgroup.ids, dtype=np.int32)
        rep = g.table[:, arr].min(axis=1)
        return cls(group=g, subgroup=subgroup, reps=tuple(int(r) for r in np.unique(rep)))

    def __len__(self) -> int:
        return len(self.reps)


@dataclass(frozen=True)
class CosetActionSystem:
    system: InverseSystem
    spaces: tuple[CosetSpace, ...]
    to_level: tuple[GroupHom, ...]  # the acting group onto each level


def coset_action_system(g: FiniteGroup, chain: Sequence[Subgroup],
                        *, caps: Caps = DEFAULT_CAPS) -> CosetActionSystem:
    """Levels induced by g acting on growing unions of coset spaces.

    Level n is the permutation image of g on the disjoint union of the coset
    spaces of the first n chain members; projections restrict permutations.
    """
    if not chain:
        raise ValidationError("chain must be nonempty")
    for sub in chain:
        if sub.group is not g:
            raise ValidationError("chain subgroups must live in the acting group")
    for a, b in zip(chain, chain[1:]):
        if not a.contains_subgroup(b):
            raise ValidationError("chain must be descending")
    if len(chain) > caps.tower_length:
        raise CapExceeded("tower_length", caps.tower_length, len(chain))

    spaces = [CosetSpace.build(sub) for sub in chain]
    total_points = sum(len(s) for s in spaces)
    if total_points > caps.order:
        raise CapExceeded("order", caps.order, total_points)

    # rep lookup per space: element id -> canonical coset representative
    rep_arrays = []
    for sub in chain:
        arr = np.array(sub.ids, dtype=np.int32)
        rep_arrays.append(g.table[:, arr].min(axis=1))

    gens = _greedy_generators(g.table)
    levels: list[FiniteGroup] = []
    projections: list[GroupHom] = []
    to_level: list[GroupHom] = []
    prev_perm_index: dict[bytes, int] | None = None
    prev_degree = 0

    for n in range(1, len(chain) + 1):
        offsets = []
        off = 0
        for s in spaces[:n]:
            offsets.append(off)
            off += len(s)
        degree = off
        point_index = []
        for i in range(n):
            lookup = {r: offsets[i] + j for j, r in enumerate(spaces[i].reps)}
            point_index.append(lookup)

        def perm_of(x: int) -> np.ndarray:
            images = np.empty(degree, dtype=np.int32)
            for i in range(n):
                for j, r in enumerate(spaces[i].reps):
                    moved = int(rep_arrays[i][g.table[x, r]])
                    images[offsets[i] + j] = point_index[i][moved]
            return images

        gen_perms = [perm_of(x) for x in gens]
        perms, index, parents, genidx = _perm_closure(gen_perms, degree, caps.order)
        table, gen_ids = _table_from_perm_closure(perms, index, parents, genidx, gen_perms)
        presentation = PermGenerators(
            degree=degree,
            perms=tuple(tuple(int(v) for v in p) for p in gen_perms),
            element_ids=tuple(gen_ids),
        )
        words = (np.array(parents, dtype=np.int32), np.array(genidx, dtype=np.int32))
        level = FiniteGroup(table, name=f"{g.name}|X{n}", perm_generators=presentation,
                            words=words, validate="basic", caps=caps)
        levels.append(level)

        # the acting group onto this level
        acting_map = np.empty(g.order, dtype=np.int32)
        for x in range(g.order):
            acting_map[x] = index[perm_of(x).tobytes()]
        to_level.append(GroupHom(g, level, acting_map, validate=False))

        if prev_perm_index is not None:
            proj_map = np.empty(level.order, dtype=np.int32)
            for eid, perm in enumerate(perms):
                proj_map[eid] = prev_perm_index[perm[:prev_degree].tobytes()]
            projections.append(GroupHom(level, levels[-2], proj_map, validate=False))

        prev_perm_index = index
        prev_degree = degree

    system = InverseSystem(levels, projections, caps=caps)
    return CosetActionSystem(system=system, spaces=tuple(spaces), to_level=tuple(to_level))


@dataclass(frozen=True)
class ClosureTrace:
    """Images of a designated top-level subgroup at every level."""

    system: InverseSystem
    per_level: tuple[Subgroup, ...]


def closure_trace(system: InverseSystem, origin: Subgroup) -> ClosureTrace:
    if origin.group is not system.top:
        raise ValidationError("origin must be a subgroup of the top level")
    per_level = []
    for i in range(len(system.levels)):
        per_level.append(system.maps_to(i).map_subgroup(origin))
    for i in range(len(system.levels) - 1):
        upper = per_level[i + 1]
        mapped = system.projections[i].map_subgroup(upper)
        if mapped != per_level[i]:
            raise ValidationError("projections do not map trace entries onto each other")
    return ClosureTrace(system=system, per_level=tuple(per_level))


@dataclass(frozen=True)
class QuotientTrace:
    """Per-level quotients (image of n2)/(image of n1) with induced projections."""

    levels: tuple[FiniteGroup, ...]
    projections: tuple[GroupHom, ...]


def quotient_trace(system: InverseSystem, n1: Subgroup, n2: Subgroup,
                   *, caps: Caps = DEFAULT_CAPS) -> QuotientTrace:
    top = system.top
    if n1.group is not top or n2.group is not top:
        raise ValidationError("subgroups must live in the top level")
    if not n2.contains_subgroup(n1):
        raise ValidationError("need n1 <= n2")
    if not n1.is_normal():
        raise ValidationError("n1 must be normal in the top level")

    q_levels: list[FiniteGroup] = []
    coset_maps: list[np.ndarray] = []  # level element id (in image of n2) -> quotient id
    local_maps: list[np.ndarray] = []  # level id -> local id within image of n2
    for i in range(len(system.levels)):
        hom = system.maps_to(i)
        a_i = hom.map_subgroup(n2)
        b_i = hom.map_subgroup(n1)
        a_grp, a_embed = a_i.as_group()
        local = np.full(system.levels[i].order, -1, dtype=np.int32)
        local[np.array(a_i.ids, dtype=np.int32)] = np.arange(len(a_i), dtype=np.int32)
        b_local = Subgroup(a_grp, [int(local[x]) for x in b_i.ids])
        q, proj = quotient(a_grp, b_local)
        q_levels.append(q)
        coset_maps.append(proj.mapping)
        local_maps.append(local)

    q_projections = []
    for i in range(len(system.levels) - 1):
        upper_a_ids = np.flatnonzero(local_maps[i + 1] >= 0)
        mapping = np.empty(q_levels[i + 1].order, dtype=np.int32)
        proj = system.projections[i]
        for x in upper_a_ids:
            qx = coset_maps[i + 1][local_maps[i + 1][x]]
            y = proj(int(x))
            mapping[qx] = coset_maps[i][local_maps[i][y]]
        q_projections.append(GroupHom(q_levels[i + 1], q_levels[i], mapping, validate=True))
    return QuotientTrace(levels=tuple(q_levels), projections=tuple(q_projections))


@dataclass(frozen=True)
class CommutatorCheckReport:
    passed: bool
    first_failure: int | None
    per_level: tuple[bool, ...]


def commutator_level_check(system: InverseSystem, k: Subgroup, l: Subgroup) -> CommutatorCheckReport:
    """At every level: image of [k, l] equals the commutator of the images."""
    top = system.top
    if k.group is not top or l.group is not top:
        raise ValidationError("subgroups must live in the top level")
    comm_top = commutator_subgroup(k, l)
    per_level = []
    first_failure = None
    for i in range(len(system.levels)):
        hom = system.maps_to(i)
        image_of_comm = hom.map_subgroup(comm_top)
        comm_of_images = commutator_subgroup(hom.map_subgroup(k), hom.map_subgroup(l))
        ok = image_of_comm == comm_of_images
        per_level.append(ok)
        if not ok and first_failure is None:
            first_failure = i
    return CommutatorCheckReport(passed=first_failure is None,
                                 first_failure=first_failure,
                                 per_level=tuple(per_level))


def cp_sequence(system: InverseSystem, *, caps: Caps = DEFAULT_CAPS) -> tuple[Fraction, ...]:
    """Exact commuting-pair fraction at each level."""
    out = []
    for level in system.levels:
        if level.order > caps.order:
            raise CapExceeded("order", caps.order, level.order)
        out.append(Fraction(commuting_pair_count(level), level.order**2))
    return tuple(out)


def direct_power_system(p: FiniteGroup, depth: int, *, caps: Caps = DEFAULT_CAPS) -> InverseSystem:
    """Tower P <- P^2 <- ... <- P^depth with coordinate-forgetting projections."""
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    if p.order**depth > caps.materialized_order:
        raise CapExceeded("materialized_order", caps.materialized_order, p.order**depth)
    big = caps.with_overrides(order=max(caps.order, caps.materialized_order))
    levels = [direct_power(p, k, caps=big) for k in range(1, depth + 1)]
    projections = []
    for k in range(depth - 1):
        upper, lower = levels[k + 1], levels[k]
        mapping = (np.arange(upper.order, dtype=np.int64) // p.order).astype(np.int32)
        projections.append(GroupHom(upper, lower, mapping, validate=False))
    return InverseSystem(levels, projections, caps=caps)
