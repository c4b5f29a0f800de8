"""Command-line front end.

Three subcommands::

    nf     -g FILE -e EXPR          normal form of an expression
    basis  -g FILE --mode M --vertex V -l L -N N      index-pair listing
    check  -g FILE --mode M [-N ...] [--degrees LO..HI] [--suites ...]

Exit codes: 0 all requested checks pass, 1 some check failed, 2 usage or
input errors (bad file, bad expression, wrong mode for the graph), 3 the
oracle hit its rewrite-step cap.  Reports are deterministic given the
flags; sampled suites take ``--seed`` (default 0) and ``--samples``
(default 500) and echo their samples into the JSON report (``--json``).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from .complexes import (INJECTIVE, PROJECTIVE, CheckReport, LeavittComplex,
                        Window, check_A_linearity, check_d_squared,
                        write_json_report)
from .bimodule import check_bimodule
from .graph import ASSOCIATED, SPECIAL, EdgeChoice, GraphError, parse_graph
from .homotopy import check_homotopy
from .independence import check_independence
from .lpa import ExprError, LeavittAlgebra
from .oracle import DEFAULT_MAX_STEPS, RewriteBudgetExceeded, check_nf_oracle

SUITES = ("d2", "alinear", "bimodule", "homotopy", "independence", "nf-oracle")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leavitt",
        description="Exact verification toolkit for Leavitt path algebras "
                    "and their injective/projective complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    nf = sub.add_parser("nf", help="print the normal form of an expression")
    nf.add_argument("-g", "--graph", required=True, help="graph file")
    nf.add_argument("-e", "--expr", required=True, help="expression to evaluate")

    basis = sub.add_parser("basis", help="list the index pairs of one component")
    basis.add_argument("-g", "--graph", required=True)
    basis.add_argument("--mode", choices=(INJECTIVE, PROJECTIVE), required=True)
    basis.add_argument("--vertex", required=True)
    basis.add_argument("-l", "--degree", type=int, required=True)
    basis.add_argument("-N", type=int, required=True, help="path-length cap")

    check = sub.add_parser("check", help="run verification suites")
    check.add_argument("-g", "--graph", required=True)
    check.add_argument("--mode", choices=(INJECTIVE, PROJECTIVE), required=True)
    check.add_argument("-N", type=int, default=4, help="path-length cap (default 4)")
    check.add_argument("--degrees", default="-2..2", metavar="LO..HI",
                       help="degree interval (default -2..2)")
    check.add_argument("--suites", default="all",
                       help="comma-separated subset of %s or 'all'" % ",".join(SUITES))
    check.add_argument("--choice2", default=None, metavar="CSV",
                       help="alternate special/associated edges for the "
                            "independence suite")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--samples", type=int, default=500)
    check.add_argument("--max-rewrite-steps", type=int, default=DEFAULT_MAX_STEPS,
                       help="oracle rewrite budget")
    check.add_argument("--json", default=None, metavar="PATH",
                       help="also write the report as JSON")
    return parser


def _load(path: str):
    try:
        text = FsPath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from exc
    return parse_graph(text, name=FsPath(path).stem)


def _pick_choice(parsed, mode: str) -> EdgeChoice:
    choice = parsed.special if mode == INJECTIVE else parsed.associated
    if choice is None:
        kind = SPECIAL if mode == INJECTIVE else ASSOCIATED
        raise UsageError(f"graph file declares no {kind} edges; "
                         f"{mode} mode needs them")
    return choice


def _parse_degrees(spec: str) -> tuple[int, int]:
    try:
        lo_text, hi_text = spec.split("..", 1)
        return int(lo_text), int(hi_text)
    except ValueError as exc:
        raise UsageError(f"bad degree interval {spec!r}; expected LO..HI") from exc


def cmd_nf(args) -> int:
    parsed = _load(args.graph)
    if parsed.special is None:
        raise UsageError("graph file declares no special edges; "
                         "the normal form needs them")
    algebra = LeavittAlgebra(parsed.graph, parsed.special)
    print(algebra.parse(args.expr))
    return 0


def cmd_basis(args) -> int:
    parsed = _load(args.graph)
    choice = _pick_choice(parsed, args.mode)
    if not parsed.graph.has_vertex(args.vertex):
        raise UsageError(f"unknown vertex {args.vertex!r}")
    if args.N < 0:
        raise UsageError("N must be >= 0")
    cx = LeavittComplex(parsed.graph, choice, args.mode)
    pairs = cx.index_pairs(args.vertex, args.degree, args.N)
    print(f"count={len(pairs)} vertex={args.vertex} degree={args.degree} N={args.N}")
    for p, q in pairs:
        print(f"({p}, {q})")
    return 0


def cmd_check(args) -> int:
    parsed = _load(args.graph)
    graph = parsed.graph
    if args.mode == INJECTIVE and graph.has_sinks():
        raise UsageError("injective mode needs a graph without sinks; "
                         f"sink vertices: {', '.join(graph.sinks())}")
    if args.mode == PROJECTIVE and graph.has_sources():
        raise UsageError("projective mode needs a graph without sources; "
                         f"source vertices: {', '.join(graph.sources())}")
    choice = _pick_choice(parsed, args.mode)
    lo, hi = _parse_degrees(args.degrees)
    try:
        window = Window(args.N, lo, hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    wanted = SUITES if args.suites == "all" else tuple(args.suites.split(","))
    for name in wanted:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")

    cx = LeavittComplex(graph, choice, args.mode)
    alt_choice = choice
    if args.choice2:
        for edge in args.choice2.split(","):
            alt_choice = alt_choice.with_pick(edge.strip())
    reports: list[CheckReport] = []
    for name in SUITES:
        if name not in wanted:
            continue
        if name == "d2":
            reports.append(check_d_squared(cx, window))
        elif name == "alinear":
            reports.append(check_A_linearity(cx, window))
        elif name == "bimodule":
            reports.append(check_bimodule(cx, window, args.seed, args.samples))
        elif name == "homotopy":
            reports.append(check_homotopy(cx, window, args.seed, args.samples))
        elif name == "independence":
            cx2 = LeavittComplex(graph, alt_choice, args.mode)
            reports.append(check_independence(cx, cx2, window, args.seed,
                                              args.samples))
        elif name == "nf-oracle":
            reports.append(check_nf_oracle(cx.algebra, args.seed, args.samples,
                                           max_steps=args.max_rewrite_steps,
                                           graph_name=graph.name, mode=args.mode,
                                           window=str(window)))
    for report in reports:
        print(report.line())
    if args.json:
        write_json_report(args.json, reports, {
            "graph": graph.name, "mode": args.mode, "window": str(window),
            "seed": args.seed, "samples": args.samples,
            "suites_requested": list(wanted),
        })
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.command == "nf":
            return cmd_nf(args)
        if args.command == "basis":
            return cmd_basis(args)
        return cmd_check(args)
    except RewriteBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, GraphError, ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
