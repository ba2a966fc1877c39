"""Batch front door: corpus analysis subcommands with exact JSON/CSV reports.

Reports are byte-deterministic: sorted keys, compact separators, no floats,
rationals rendered as "num/den" strings.  Exit codes: 0 all items succeeded,
2 partial failure, 1 invalid job or total failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .boolean import BooleanIdeal, build_boolean_ring
from .boolpower import bp_quotient_iso, verify_ideal_correspondence
from .config import DEFAULT_CAPS, Caps
from .corpus import Corpus, bundled_corpus, bundled_towers, load_corpus
from .errors import GroupLabError, ValidationError
from .groups import FiniteGroup, GroupHom, Subgroup
from .measure import (
    commuting_pairs,
    group_rank_bound,
    neumann_search,
    rho_table,
    rho_wedge,
    verify_inequalities,
)
from .modring import (
    GModuleAction,
    action_from_matrices,
    mr_factor_sizes_for_report,
    nilpotent_free_check,
    orbit_span_check,
    ring_construct,
    sum_zero_action,
)
from .towers import InverseSystem, commutator_level_check, coset_action_system, cp_sequence

REPORT_COLUMNS_V1 = (
    "name", "order", "pairs", "fraction",
    "neumann_k_size", "neumann_n_index", "neumann_value",
    "rho_r", "rho_wedge",
)
RHO_COLUMNS_V1 = ("kind", "order", "value", "family_mode")
BP_COLUMNS_V1 = (
    "base", "atoms", "ideal_atoms", "quotient_m", "iso_verified",
    "normal_count", "ideal_count", "correspondence_matches", "expected_match",
)
FILTERED_COLUMNS_V1 = ("field", "atoms", "constraints", "size", "factor_sizes",
                       "nilpotent_free")
TOWER_COLUMNS_V1 = ("tower", "level", "order", "pairs", "fraction", "monotone", "commutator_check")
RING_COLUMNS_V1 = (
    "action", "well_defined", "commutative", "nilpotent_free",
    "nilpotent_witness", "translate_bound", "mr_factor_sizes",
)
INEQ_COLUMNS_V1 = (
    "ineq", "order", "prime", "rho_r", "beta", "rho_wedge",
    "lhs", "rhs", "passed", "intermediate_passed",
)


def frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _csv_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _emit(payload: dict, columns: Sequence[str], rows: list[dict], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(col)) for col in columns])
        text = buf.getvalue()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _select_groups(corpus: Corpus, names: list[str] | None
                   ) -> tuple[list[tuple[str, FiniteGroup]], list[dict]]:
    """Resolve names against the corpus; unknown names become per-item errors."""
    if not names:
        return corpus.items(), []
    out, errors = [], []
    for name in names:
        try:
            out.append((name, corpus[name]))
        except ValidationError as exc:
            errors.append({"item": name, "error": str(exc)})
    return out, errors


def _canonical_row(name: str, g: FiniteGroup, caps: Caps, *, full: bool) -> dict:
    stats = commuting_pairs(g, name=name, caps=caps)
    witness = neumann_search(g, name=name, caps=caps)
    row = {
        "name": name,
        "order": stats.order,
        "pairs": stats.pairs,
        "fraction": frac_str(stats.fraction),
        "neumann_k_size": witness.k_size,
        "neumann_n_index": witness.n_index,
        "neumann_value": witness.value,
        "rho_r": None,
        "rho_wedge": None,
    }
    if full:
        row["rho_r"] = group_rank_bound(g, caps=caps)
        try:
            report = rho_wedge(g, name=name, caps=caps)
            row["rho_wedge"] = report.k if report.k is not None else "inf"
        except ValidationError:
            row["rho_wedge"] = None
    return row


def _run_per_group(args, corpus: Corpus, caps: Caps, *, full: bool) -> tuple[list[dict], list[dict]]:
    selected, errors = _select_groups(corpus, args.group)
    items = []
    for name, g in selected:
        try:
            items.append(_canonical_row(name, g, caps, full=full))
        except GroupLabError as exc:
            errors.append({"item": name, "error": str(exc)})
    return items, errors


def _cmd_analyze_group(args, corpus: Corpus, caps: Caps):
    items, errors = _run_per_group(args, corpus, caps, full=True)
    return items, errors, REPORT_COLUMNS_V1


def _cmd_neumann(args, corpus: Corpus, caps: Caps):
    items, errors = _run_per_group(args, corpus, caps, full=False)
    return items, errors, REPORT_COLUMNS_V1


def _cmd_rho(args, corpus: Corpus, caps: Caps):
    orders = None
    if args.max_order is not None:
        orders = list(range(1, args.max_order + 1))
    table = rho_table(corpus.items(), args.kind, orders=orders,
                      family_mode=args.mode, caps=caps)
    items = [
        {
            "kind": table.kind,
            "order": order,
            "value": value if value is not None else "inf",
            "family_mode": table.family_mode,
        }
        for order, value in table.entries
    ]
    return items, [], RHO_COLUMNS_V1


def _cmd_boolean_power(args, corpus: Corpus, caps: Caps):
    if args.spec:
        payload = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        if "field" in payload:
            return _filtered_power_rows(payload, caps)
        args.base = payload["base_group"]
        args.atoms = int(payload["atoms"])
    if not args.base or args.atoms is None:
        raise ValidationError("boolean-power needs --base/--atoms or --spec")
    base = corpus[args.base]
    ring = build_boolean_ring(args.atoms, caps=caps)
    items, errors = [], []
    try:
        report = verify_ideal_correspondence(base, ring, caps=caps)
    except GroupLabError as exc:
        return [], [{"item": args.base, "error": str(exc)}], BP_COLUMNS_V1
    for span in range(1 << args.atoms):
        ideal = BooleanIdeal(ring, span)
        label = ",".join(str(i) for i in ring.atom_indices(span))
        try:
            iso = bp_quotient_iso(base, ring, ideal, caps=caps)
            items.append({
                "base": args.base,
                "atoms": args.atoms,
                "ideal_atoms": label,
                "quotient_m": iso.m,
                "iso_verified": iso.verified,
                "normal_count": report.normal_count,
                "ideal_count": report.ideal_count,
                "correspondence_matches": report.matches,
                "expected_match": report.expected_match,
            })
        except GroupLabError as exc:
            errors.append({"item": f"{args.base}[{label}]", "error": str(exc)})
    return items, errors, BP_COLUMNS_V1


def _filtered_power_rows(payload: dict, caps: Caps):
    from .algebras import field_by_name, mr_decompose, prime_subfield_ids
    from .boolpower import filtered_power, filtered_power_spec

    field = field_by_name(payload["field"])
    ring = build_boolean_ring(int(payload["atoms"]), caps=caps)
    constraints = []
    described = []
    for entry in payload.get("constraints", ()):
        sub = field_by_name(entry["subfield"])
        # bundled fields only have the prime subfield and themselves
        if sub.char != field.char or sub.size not in (field.char, field.size):
            raise ValidationError(f"{entry['subfield']} is not a subfield of {payload['field']}")
        ids = prime_subfield_ids(field) if sub.size == field.char else frozenset(field.elements())
        constraints.append((entry["points"], ids))
        described.append(f"{','.join(str(p) for p in entry['points'])}:{entry['subfield']}")
    spec = filtered_power_spec(field, ring, constraints)
    algebra = filtered_power(spec, caps=caps)
    decomp = mr_decompose(algebra, caps=caps)
    row = {
        "field": payload["field"],
        "atoms": ring.atom_count,
        "constraints": ";".join(described),
        "size": algebra.size,
        "factor_sizes": ",".join(str(f.field.size) for f in decomp.factors),
        "nilpotent_free": True,
    }
    return [row], [], FILTERED_COLUMNS_V1


def _tower_from_file(path: str, corpus: Corpus, caps: Caps) -> InverseSystem:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if "group" in payload:
        g = corpus[payload["group"]]
        chain = [Subgroup(g, ids) for ids in payload["chain"]]
        return coset_action_system(g, chain, caps=caps).system
    levels = [corpus[name] for name in payload["levels"]]
    projections = [
        GroupHom(levels[i + 1], levels[i], mapping)
        for i, mapping in enumerate(payload["projections"])
    ]
    return InverseSystem(levels, projections, caps=caps)


def _cmd_inverse_system(args, corpus: Corpus, caps: Caps):
    towers: dict[str, InverseSystem] = {}
    if args.tower_file:
        towers[Path(args.tower_file).stem] = _tower_from_file(args.tower_file, corpus, caps)
    else:
        bundled = bundled_towers(corpus if len(corpus) else None, caps=caps)
        if args.tower:
            for name in args.tower:
                if name not in bundled:
                    raise ValidationError(f"unknown tower {name!r}; bundled: {sorted(bundled)}")
                towers[name] = bundled[name]
        else:
            towers = bundled
    items, errors = [], []
    for name in sorted(towers):
        system = towers[name]
        try:
            seq = cp_sequence(system, caps=caps)
            monotone = all(b <= a for a, b in zip(seq, seq[1:]))
            top = system.top
            check = commutator_level_check(system, top.whole_subgroup(), top.whole_subgroup())
            for level, frac in enumerate(seq):
                items.append({
                    "tower": name,
                    "level": level,
                    "order": system.levels[level].order,
                    "pairs": frac.numerator * system.levels[level].order**2 // frac.denominator,
                    "fraction": frac_str(frac),
                    "monotone": monotone,
                    "commutator_check": check.passed,
                })
        except GroupLabError as exc:
            errors.append({"item": name, "error": str(exc)})
    return items, errors, TOWER_COLUMNS_V1


def _bundled_actions(corpus: Corpus, caps: Caps) -> dict[str, tuple[GModuleAction, tuple[int, ...]]]:
    z2 = corpus["Z2"]
    swap = {1: [[0, 1], [1, 0]]}
    out = {
        "swap-gf3": (action_from_matrices(z2, 3, 2, swap, caps=caps), (1, 0)),
        "regular-gf2": (action_from_matrices(z2, 2, 2, swap, caps=caps), (1, 0)),
        "s3-std-gf5": (sum_zero_action(corpus["S3"], 5, caps=caps), (1, 0)),
    }
    return out


def _action_from_file(path: str, corpus: Corpus, caps: Caps) -> tuple[GModuleAction, tuple[int, ...]]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    g = corpus[payload["group"]]
    matrices = {int(k): v for k, v in payload["matrices"].items()}
    action = action_from_matrices(g, int(payload["p"]), int(payload["dim"]), matrices, caps=caps)
    if "v" in payload:
        return action, tuple(int(x) for x in payload["v"])
    for vec in action.vectors():
        if orbit_span_check(action, vec).spans:
            return action, vec
    raise ValidationError("no vector has spanning translates")


def _cmd_ring_from_module(args, corpus: Corpus, caps: Caps):
    jobs: dict[str, tuple[GModuleAction, tuple[int, ...]]] = {}
    if args.action_file:
        jobs[Path(args.action_file).stem] = _action_from_file(args.action_file, corpus, caps)
    else:
        bundled = _bundled_actions(corpus, caps)
        if args.example:
            for name in args.example:
                if name not in bundled:
                    raise ValidationError(f"unknown example {name!r}; bundled: {sorted(bundled)}")
                jobs[name] = bundled[name]
        else:
            jobs = bundled
    items, errors = [], []
    for name in sorted(jobs):
        action, v = jobs[name]
        try:
            built = ring_construct(action, v, caps=caps)
            row = {
                "action": name,
                "well_defined": built.well_defined,
                "commutative": None,
                "nilpotent_free": None,
                "nilpotent_witness": None,
                "translate_bound": built.translate_bound,
                "mr_factor_sizes": None,
            }
            if built.well_defined and built.ring is not None:
                ring = built.ring
                row["commutative"] = ring.is_commutative()
                ok, witness = nilpotent_free_check(ring, caps=caps)
                row["nilpotent_free"] = ok
                if witness is not None:
                    row["nilpotent_witness"] = ",".join(str(c) for c in ring.to_vector(witness))
                row["mr_factor_sizes"] = mr_factor_sizes_for_report(ring, ok, caps=caps)
            items.append(row)
        except GroupLabError as exc:
            errors.append({"item": name, "error": str(exc)})
    return items, errors, RING_COLUMNS_V1


def _cmd_verify_inequalities(args, corpus: Corpus, caps: Caps):
    beta = None
    if args.beta_table:
        raw = json.loads(Path(args.beta_table).read_text(encoding="utf-8"))
        beta = {int(k): int(v) for k, v in raw.items()}
    members, select_errors = _select_groups(corpus, args.group)
    report = verify_inequalities(members, beta_table=beta, caps=caps)
    items = []
    for row in report.ineq1:
        items.append({
            "ineq": 1, "order": row.order, "prime": None,
            "rho_r": row.rho_r, "beta": row.beta, "rho_wedge": None,
            "lhs": frac_str(row.lhs), "rhs": str(row.rhs),
            "passed": row.passed, "intermediate_passed": None,
        })
    for row in report.ineq2:
        items.append({
            "ineq": 2, "order": row.order, "prime": row.prime,
            "rho_r": None, "beta": None, "rho_wedge": row.rho_wedge,
            "lhs": frac_str(row.lhs_squared), "rhs": str(row.rhs_squared),
            "passed": row.passed,
            "intermediate_passed": all(r.passed for r in row.intermediate),
        })
    errors = list(select_errors)
    if not items:
        errors.append({"item": "verify-inequalities", "error": "no applicable corpus members"})
    return items, errors, INEQ_COLUMNS_V1


_HANDLERS = {
    "analyze-group": _cmd_analyze_group,
    "neumann": _cmd_neumann,
    "rho": _cmd_rho,
    "boolean-power": _cmd_boolean_power,
    "inverse-system": _cmd_inverse_system,
    "ring-from-module": _cmd_ring_from_module,
    "verify-inequalities": _cmd_verify_inequalities,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", help="corpus directory (default: bundled groups)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cap-order", type=int, default=None)
    common.add_argument("--cap-subgroups", type=int, default=None)

    parser = argparse.ArgumentParser(prog="grouplab",
                                     description="exact finite-group analysis reports")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze-group", parents=[common], help="full per-group report")
    p.add_argument("--group", action="append", help="group name (repeatable; default all)")

    p = sub.add_parser("neumann", parents=[common],
                       help="commuting counts and witness decompositions")
    p.add_argument("--group", action="append")

    p = sub.add_parser("rho", parents=[common], help="per-order minima/maxima over the corpus")
    p.add_argument("--kind", choices=("com", "r"), required=True)
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--mode", default="corpus", help="family annotation recorded in the report")

    p = sub.add_parser("boolean-power", parents=[common],
                       help="ideal correspondence and quotient powers")
    p.add_argument("--base", help="base group name")
    p.add_argument("--atoms", type=int, help="atoms of the Boolean ring")
    p.add_argument("--spec", help="power spec JSON (group or filtered-field form)")

    p = sub.add_parser("inverse-system", parents=[common],
                       help="commuting fractions along towers")
    p.add_argument("--tower", action="append", help="bundled tower name (repeatable)")
    p.add_argument("--tower-file", help="tower spec JSON")

    p = sub.add_parser("ring-from-module", parents=[common],
                       help="module-to-ring construction reports")
    p.add_argument("--example", action="append", help="bundled action name (repeatable)")
    p.add_argument("--action-file", help="action spec JSON")

    p = sub.add_parser("verify-inequalities", parents=[common],
                       help="commuting-count lower bounds")
    p.add_argument("--beta-table", help="JSON map rank -> beta value")
    p.add_argument("--group", action="append")
    return parser


_HARD_CAP = 100_000  # upper bound for any CLI cap override


def _job_echo(args) -> dict:
    """The options that shape the result, excluding the output path."""
    skip = {"subcommand", "out"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        echo[key.replace("_", "-")] = value
    return echo


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    for flag in (args.cap_order, args.cap_subgroups):
        if flag is not None and not 1 <= flag <= _HARD_CAP:
            sys.stderr.write(f"error: cap overrides must be in 1..{_HARD_CAP}\n")
            return 1
    caps = DEFAULT_CAPS.with_overrides(order=args.cap_order, subgroup_order=args.cap_subgroups)
    try:
        corpus = load_corpus(args.corpus, caps=caps) if args.corpus else bundled_corpus(caps=caps)
        items, errors, columns = _HANDLERS[args.subcommand](args, corpus, caps)
    except (GroupLabError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    payload = {
        "tool": "grouplab",
        "version": __version__,
        "subcommand": args.subcommand,
        "job": _job_echo(args),
        "items": items,
        "errors": errors,
    }
    _emit(payload, columns, items, args.format, args.out)
    if errors and items:
        return 2
    if errors and not items:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
