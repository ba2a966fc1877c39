"""The bundled small-group corpus, JSON corpus files, and bundled towers.

Group file format: {"name": str, "order": int, "table": [[int]]} or
{"name": str, "degree": int, "generators": [[int]]} with 0-based
permutation images.  A corpus directory holds one file per group plus
index.json listing names, orders and file names.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Iterator

from .config import DEFAULT_CAPS, Caps
from .errors import ValidationError
from .groups import FiniteGroup, Subgroup, build_group, subgroup_closure
from .towers import InverseSystem, coset_action_system, direct_power_system

__all__ = [
    "Corpus",
    "bundled_corpus",
    "bundled_towers",
    "load_corpus",
    "load_group_file",
    "save_corpus",
]


class Corpus:
    """An ordered name -> group mapping, sorted by (order, name)."""

    def __init__(self, groups: dict[str, FiniteGroup]):
        ordered = sorted(groups.items(), key=lambda kv: (kv[1].order, kv[0]))
        self._groups = dict(ordered)

    def __len__(self) -> int:
        return len(self._groups)

    def __contains__(self, name: str) -> bool:
        return name in self._groups

    def __getitem__(self, name: str) -> FiniteGroup:
        if name not in self._groups:
            raise ValidationError(f"unknown group {name!r}")
        return self._groups[name]

    def names(self) -> list[str]:
        return list(self._groups)

    def items(self) -> list[tuple[str, FiniteGroup]]:
        return list(self._groups.items())

    def __iter__(self) -> Iterator[tuple[str, FiniteGroup]]:
        return iter(self._groups.items())

    def index(self) -> list[tuple[str, int]]:
        return [(name, g.order) for name, g in self._groups.items()]


def _cycle(n: int) -> list[int]:
    return [(i + 1) % n for i in range(n)]


def _quaternion_generators() -> tuple[int, list[list[int]]]:
    # units 1, -1, i, -i, j, -j, k, -k as ids 0..7; left multiplication perms
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def mul(a: str, b: str) -> str:
        sign = 1
        if a.startswith("-"):
            sign, a = -sign, a[1:]
        if b.startswith("-"):
            sign, b = -sign, b[1:]
        if a == "1":
            out = b
        elif b == "1":
            out = a
        else:
            out = base[(a, b)]
        if out.startswith("-"):
            sign, out = -sign, out[1:]
        return out if sign > 0 else f"-{out}"

    idx = {s: i for i, s in enumerate(names)}
    gens = []
    for gen in ("i", "j"):
        gens.append([idx[mul(gen, x)] for x in names])
    return len(names), gens


def _heisenberg27_generators() -> tuple[int, list[list[int]]]:
    # triples (a, b, c) mod 3 with (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b')
    def eid(a: int, b: int, c: int) -> int:
        return (a % 3) * 9 + (b % 3) * 3 + (c % 3)

    def mul(x: tuple[int, int, int], y: tuple[int, int, int]) -> tuple[int, int, int]:
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3, (x[2] + y[2] + x[0] * y[1]) % 3)

    elems = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    gens = []
    for gen in ((1, 0, 0), (0, 1, 0)):
        gens.append([eid(*mul(gen, e)) for e in elems])
    return 27, gens


def _exponent9_extraspecial_generators() -> tuple[int, list[list[int]]]:
    # a of order 9, b of order 3, with b^-1 a b = a^4 (so b^j a^k = a^(k*7^j) b^j)
    def eid(i: int, j: int) -> int:
        return (i % 9) * 3 + (j % 3)

    def mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        i, j = x
        k, l = y
        return ((i + k * pow(7, j, 9)) % 9, (j + l) % 3)

    elems = [(i, j) for i in range(9) for j in range(3)]
    gens = []
    for gen in ((1, 0), (0, 1)):
        gens.append([eid(*mul(gen, e)) for e in elems])
    return 27, gens


def _bundled_builders() -> list[tuple[str, int, list[list[int]]]]:
    out: list[tuple[str, int, list[list[int]]]] = []
    for n in range(1, 17):
        gens = [] if n == 1 else [_cycle(n)]
        out.append((f"Z{n}", max(n, 1), gens))
    out.append(("V4", 4, [[1, 0, 3, 2], [2, 3, 0, 1]]))
    out.append(("S3", 3, [[1, 0, 2], [1, 2, 0]]))
    out.append(("D4", 4, [[1, 2, 3, 0], [3, 2, 1, 0]]))
    q_degree, q_gens = _quaternion_generators()
    out.append(("Q8", q_degree, q_gens))
    out.append(("A4", 4, [[1, 0, 3, 2], [1, 2, 0, 3]]))
    out.append(("S4", 4, [[1, 0, 2, 3], [1, 2, 3, 0]]))
    out.append(("A5", 5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]]))
    h_degree, h_gens = _heisenberg27_generators()
    out.append(("Heis27", h_degree, h_gens))
    m_degree, m_gens = _exponent9_extraspecial_generators()
    out.append(("M27", m_degree, m_gens))
    return out


_EXPECTED_ORDERS = {
    "V4": 4, "S3": 6, "D4": 8, "Q8": 8, "A4": 12, "S4": 24, "A5": 60,
    "Heis27": 27, "M27": 27,
}


def bundled_corpus(*, caps: Caps = DEFAULT_CAPS) -> Corpus:
    """The in-tree corpus, built from permutation generators and validated."""
    groups: dict[str, FiniteGroup] = {}
    for name, degree, gens in _bundled_builders():
        g = build_group(generators=gens, degree=degree, name=name, caps=caps)
        expected = _EXPECTED_ORDERS.get(name, int(name[1:]) if name.startswith("Z") else None)
        if expected is not None and g.order != expected:
            raise ValidationError(f"bundled group {name} has order {g.order}, expected {expected}")
        groups[name] = g
    return Corpus(groups)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write one JSON file per group plus index.json."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    index = []
    for name, g in corpus.items():
        fname = f"{name}.json"
        if g.perm_generators is not None:
            payload = {
                "name": name,
                "degree": g.perm_generators.degree,
                "generators": [list(p) for p in g.perm_generators.perms],
            }
        else:
            payload = {"name": name, "order": g.order, "table": g.table.tolist()}
        (root / fname).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
        index.append({"name": name, "order": g.order, "file": fname})
    (root / "index.json").write_text(json.dumps(index, sort_keys=True), encoding="utf-8")


def load_group_file(path: str | Path, *, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path.name}: invalid JSON ({exc})") from exc
    name = payload.get("name")
    if not isinstance(name, str) or not name:
        raise ValidationError(f"{path.name}: missing group name")
    try:
        if "table" in payload:
            g = build_group(table=payload["table"], name=name, caps=caps)
            if "order" in payload and int(payload["order"]) != g.order:
                raise ValidationError("declared order does not match the table")
        elif "generators" in payload:
            g = build_group(generators=payload["generators"],
                            degree=int(payload["degree"]), name=name, caps=caps)
        else:
            raise ValidationError("need either a table or generators")
    except ValidationError as exc:
        raise ValidationError(f"{path.name}: {exc}") from exc
    return g


def load_corpus(path: str | Path, *, caps: Caps = DEFAULT_CAPS) -> Corpus:
    """Load and validate a corpus directory; errors name the offending file."""
    root = Path(path)
    if not root.is_dir():
        raise ValidationError(f"corpus path {root} is not a directory")
    index_path = root / "index.json"
    groups: dict[str, FiniteGroup] = {}
    if not index_path.exists():
        files = sorted(root.glob("*.json"))
        if not files:
            warnings.warn(f"corpus directory {root} is empty", stacklevel=2)
            return Corpus({})
        entries = [{"file": f.name} for f in files]
    else:
        entries = json.loads(index_path.read_text(encoding="utf-8"))
    for entry in entries:
        fname = entry["file"]
        if fname == "index.json":
            continue
        g = load_group_file(root / fname, caps=caps)
        if "order" in entry and int(entry["order"]) != g.order:
            raise ValidationError(f"{fname}: index order {entry['order']} != actual {g.order}")
        if "name" in entry and entry["name"] != g.name:
            raise ValidationError(f"{fname}: index name {entry['name']!r} != {g.name!r}")
        if g.name in groups:
            raise ValidationError(f"{fname}: duplicate group name {g.name!r}")
        groups[g.name] = g
    if not groups:
        warnings.warn(f"corpus directory {root} is empty", stacklevel=2)
    return Corpus(groups)


def _power_chain_subgroups(g: FiniteGroup, generator_powers: list[int]) -> list[Subgroup]:
    chain = [g.whole_subgroup()]
    for x in generator_powers:
        chain.append(subgroup_closure(g, [x]))
    chain.append(g.trivial_subgroup())
    return chain


def bundled_towers(corpus: Corpus | None = None, *, caps: Caps = DEFAULT_CAPS
                   ) -> dict[str, InverseSystem]:
    """The three reference towers used by the verification suite."""
    corpus = corpus or bundled_corpus(caps=caps)
    out: dict[str, InverseSystem] = {}

    z8 = corpus["Z8"]
    two = subgroup_closure(z8, [2])
    four = subgroup_closure(z8, [4])
    chain = [z8.whole_subgroup(), two, four, z8.trivial_subgroup()]
    out["z8-chain"] = coset_action_system(z8, chain, caps=caps).system

    s3 = corpus["S3"]
    a3 = _alternating_subgroup(s3)
    out["s3-cosets"] = coset_action_system(
        s3, [s3.whole_subgroup(), a3, s3.trivial_subgroup()], caps=caps).system

    a5 = corpus["A5"]
    out["a5-square"] = direct_power_system(a5, 2, caps=caps)
    return out


def _alternating_subgroup(s3: FiniteGroup) -> Subgroup:
    # the unique subgroup of index 2: generated by any element of order 3
    for x in range(1, s3.order):
        if s3.element_order(x) == 3:
            return subgroup_closure(s3, [x])
    raise ValidationError("no order-3 element found")
