"""Command line interface: lattice dumps, fusion closure, biset builds, realization.

Exit codes: 0 when every verification flag holds, 1 when a flag is false,
2 on input or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bisets import serialize_virtual
from .catalog import catalog, get_entry
from .errors import (DomainError, FusionRealError, InvalidGenerator,
                     InvalidMorphism, NotAGroup, NotAPGroup, ParseError,
                     UnknownCatalogEntry)
from .fusion import (FusionSystem, close_fusion, f_classes, inner_fusion,
                     out_reps, parse_fusion_generators)
from .groups import FiniteGroup, lattice, parse_group
from .realize import RealizationReport, build_semichar, rank_and_order, verify_realization

_INPUT_ERRORS = (ParseError, NotAGroup, NotAPGroup, DomainError,
                 InvalidGenerator, InvalidMorphism, UnknownCatalogEntry)


def _load_group(args) -> tuple[str, FiniteGroup]:
    if args.catalog:
        entry = get_entry(args.catalog)
        return entry.name, entry.group
    text = Path(args.group).read_text(encoding="utf-8")
    return Path(args.group).stem, parse_group(text)


def _load_fusion(args) -> tuple[str, FusionSystem]:
    if args.catalog:
        entry = get_entry(args.catalog)
        return entry.name, entry.fusion()
    name, group = _load_group(args)
    if args.fusion:
        gens = parse_fusion_generators(Path(args.fusion).read_text(encoding="utf-8"), group)
        return name, close_fusion(group, gens)
    return name, inner_fusion(group)


def _group_header(group: FiniteGroup) -> str:
    if group.prime_power:
        p, k = group.prime_power
        return f"group order {group.order} = {p}^{k}"
    return f"group order {group.order}"


def _format_sub(sub) -> str:
    return "[" + ",".join(str(u) for u in sub.elements) + "]"


def cmd_subgroups(args) -> int:
    name, group = _load_group(args)
    lat = lattice(group)
    lines = [f"case: {name}", _group_header(group),
             f"subgroups: {lat.num_subgroups}, classes: {lat.num_classes}"]
    for c in range(lat.num_classes):
        rep = lat.class_rep(c)
        lines.append(f"class {c + 1}: order {len(rep)}, size {len(lat.class_members[c])}, "
                     f"rep {_format_sub(rep)}")
    return _emit(args, "\n".join(lines) + "\n")


def cmd_close(args) -> int:
    name, fusion = _load_fusion(args)
    lines = [f"case: {name}", _group_header(fusion.base),
             f"subgroups: {len(fusion.subgroups())}", "morphisms to S:"]
    for sub in fusion.subgroups():
        lines.append(f"  P={_format_sub(sub)} : {len(fusion.hom_tuples(sub))}")
    lines.append("fusion classes:")
    for members in f_classes(fusion):
        lines.append("  " + " ".join(_format_sub(s) for s in members))
    lines.append(f"out order: {len(out_reps(fusion))}")
    return _emit(args, "\n".join(lines) + "\n")


def cmd_build(args) -> int:
    name, fusion = _load_fusion(args)
    b = build_semichar(fusion)
    r, order_g = rank_and_order(b)
    lines = [f"case: {name}", _group_header(fusion.base),
             f"out order: {len(out_reps(fusion))}", "stabilized (rational):"]
    lines += ["  " + s for s in serialize_virtual(b.y, fusion.base)]
    lines.append(f"multiplier m: {b.m}")
    lines.append("biset (integral):")
    lines += ["  " + s for s in serialize_virtual(b.x, fusion.base)]
    size = b.x_explicit.num_points
    lines.append(f"|X| = {size}, |X|/|S| = {size // fusion.base.order}, "
                 f"residue mod {fusion.p} = {(size // fusion.base.order) % fusion.p}")
    lines.append(f"rank r: {r}")
    lines.append(f"|G| = {order_g}")
    return _emit(args, "\n".join(lines) + "\n")


def _report_text(name: str, rep: RealizationReport) -> str:
    size = rep.rank_r * rep.group_order
    flags = " ".join(f"{k}={str(v).lower()}" for k, v in rep.flags().items())
    lines = [
        f"case: {name}",
        f"group order: {rep.group_order} (p = {rep.p})",
        f"subgroups: {rep.num_subgroups}",
        f"out order: {rep.out_order}",
        "biset:",
        *("  " + s for s in rep.biset_lines),
        f"multiplier m: {rep.m}",
        f"|X| = {size}, |X|/|S| = {rep.rank_r}, residue mod {rep.p} = {rep.char_index_residue}",
        f"rank r: {rep.rank_r}",
        f"|G| = {rep.order_g}",
        f"flags: {flags}",
        f"morphisms: accepted={rep.morphisms_accepted} rejected={rep.morphisms_rejected}",
        f"verdict: {'REALIZED' if rep.realized else 'NOT REALIZED'}",
    ]
    return "\n".join(lines) + "\n"


def _report_json(name: str, rep: RealizationReport) -> str:
    doc = {
        "name": name,
        "group_order": rep.group_order,
        "p": rep.p,
        "num_subgroups": rep.num_subgroups,
        "out_order": rep.out_order,
        "m": rep.m,
        "rank_r": rep.rank_r,
        "order_G": str(rep.order_g),
        "char_index_residue": rep.char_index_residue,
        "flags": rep.flags(),
        "morphisms": {"accepted": rep.morphisms_accepted,
                      "rejected": rep.morphisms_rejected},
        "biset": list(rep.biset_lines),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str) -> int:
    sys.stdout.write(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text, encoding="utf-8")
    return 0


def cmd_realize(args) -> int:
    name, fusion = _load_fusion(args)
    rep = verify_realization(fusion, max_explicit=args.max_explicit)
    text = _report_text(name, rep)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    if args.json:
        Path(args.json).write_text(_report_json(name, rep), encoding="utf-8")
    return 0 if rep.all_checks_pass else 1


def cmd_catalog(args) -> int:
    entries = list(catalog())
    if args.names:
        entries = [get_entry(n) for n in args.names]
    elif not args.all:
        for entry in entries:
            sys.stdout.write(entry.name + "\n")
        return 0
    rows = []
    ok = True
    for entry in entries:
        rep = verify_realization(entry.fusion(), max_explicit=args.max_explicit)
        rows.append((entry.name, rep))
        ok = ok and rep.all_checks_pass
    header = f"{'name':<16} {'|S|':>4} {'p':>2} {'out':>4} {'m':>4} {'r':>5} {'|G|':>24} realized"
    lines = [header]
    for name, rep in rows:
        g = str(rep.order_g)
        if len(g) > 24:
            g = g[:21] + "..."
        lines.append(f"{name:<16} {rep.group_order:>4} {rep.p:>2} {rep.out_order:>4} "
                     f"{rep.m:>4} {rep.rank_r:>5} {g:>24} {'yes' if rep.realized else 'NO'}")
    lines.append(f"all realized: {'yes' if ok else 'NO'}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fusionreal",
        description="Close fusion systems on small p-groups, build semicharacteristic "
                    "bisets, and verify realization inside a finite group.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fusion_input=True):
        p.add_argument("--group", help="group file (.grp)")
        if fusion_input:
            p.add_argument("--fusion", help="fusion generator file (.fus)")
        p.add_argument("--catalog", help="built-in catalog entry name")
        p.add_argument("--report", help="write the text output to this file")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized property tests (reserved)")

    p = sub.add_parser("subgroups", help="dump the subgroup lattice")
    add_common(p, fusion_input=False)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("close", help="close a fusion system and summarize it")
    add_common(p)
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("build", help="build the semicharacteristic biset")
    add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("realize", help="run the full realization verification")
    add_common(p)
    p.add_argument("--json", help="write a machine-readable report to this file")
    p.add_argument("--max-explicit", type=int, default=24,
                   help="point bound for the explicit intertwiner cross-check")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("catalog", help="realize catalog entries and tabulate the results")
    p.add_argument("names", nargs="*", help="entry names (default: list entries)")
    p.add_argument("--all", action="store_true", help="run every entry")
    p.add_argument("--report", help="write the table to this file")
    p.add_argument("--max-explicit", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "group", None) is None and getattr(args, "catalog", None) is None \
            and args.command not in ("catalog",):
        print("error: provide --catalog or --group", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
