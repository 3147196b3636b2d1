"""Command-line interface: ``repshift {build,analyze,probe,alexander,catalog}``."""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .dynamics import DEFAULT_MAX_R, DEFAULT_TOL, analyze, format_machine, format_report
from .groups import GroupError, parse_group_spec
from .hnn import HnnFormatError, alexander_poly, builtin_catalog, format_poly, resolve_knot
from .probe import PROBE_MAX_N, PROBE_MIN_N, probe_knot
from .shift_graph import EdgeCapExceeded, build_graph, default_edge_cap, export_csv, export_dot, prune

EXIT_INPUT = 2
EXIT_CAP = 3


class InputError(Exception):
    pass


def _knot(args):
    try:
        return resolve_knot(args.knot)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except (HnnFormatError, OSError) as exc:
        raise InputError(f"cannot load knot {args.knot!r}: {exc}") from None


def _group(args):
    try:
        return parse_group_spec(args.group)
    except (GroupError, OSError) as exc:
        raise InputError(str(exc)) from None


def _edge_cap(args):
    return args.edge_cap if args.edge_cap is not None else default_edge_cap()


def cmd_build(args) -> int:
    sys_, G = _knot(args), _group(args)
    graph = build_graph(sys_, G, _edge_cap(args))
    pruned = prune(graph)
    print(f"knot {sys_.name}, group {G.name}")
    print(f"unpruned: vertices {graph.num_vertices}, edges {graph.num_edges}")
    print(f"pruned: vertices {pruned.num_vertices}, edges {pruned.num_edges}")
    if args.dot:
        export_dot(pruned, args.dot)
    if args.csv:
        export_csv(pruned, args.csv)
    return 0


def cmd_analyze(args) -> int:
    sys_, G = _knot(args), _group(args)
    graph = prune(build_graph(sys_, G, _edge_cap(args)))
    report = analyze(graph, args.max_r, args.tol)
    if args.machine:
        sys.stdout.write(format_machine(report))
    else:
        print(f"knot {sys_.name}, group {G.name}")
        sys.stdout.write(format_report(report))
    return 0


def cmd_probe(args) -> int:
    sys_ = _knot(args)

    def progress(name, h):
        if h is None:
            print(f"{name:>4}  skipped (edge cap)")
        else:
            print(f"{name:>4}  entropy {h:.12f}")

    verdict = probe_knot(sys_, args.max_n, _edge_cap(args), args.tol, progress=progress)
    w = verdict.certified_by
    if w is not None:
        print(f"NONFIBERED certified by {w.group}, entropy h = {w.entropy:.12f} > 0")
    else:
        print(f"no witness <= S{args.max_n}; consistent with fibered (not a certificate)")
    return 0


def cmd_alexander(args) -> int:
    sys_ = _knot(args)
    try:
        print(format_poly(alexander_poly(sys_)))
    except HnnFormatError as exc:
        raise InputError(str(exc)) from None
    return 0


def cmd_catalog(args) -> int:
    cat = builtin_catalog()
    for name in cat:
        entry = cat[name]
        kind = {True: "fibered", False: "nonfibered", None: "?"}[entry.fibered_hint]
        print(f"{name:<14} genus {entry.genus_hint}  {kind:<10}  {format_poly(alexander_poly(entry))}")
    return 0


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _probe_degree(text):
    value = int(text)
    if not PROBE_MIN_N <= value <= PROBE_MAX_N:
        raise argparse.ArgumentTypeError(f"must be between {PROBE_MIN_N} and {PROBE_MAX_N}")
    return value


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repshift", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group=True):
        p.add_argument("--knot", required=True, help="catalog name or knot file path")
        if group:
            p.add_argument("--group", required=True, help="S<k> or cayley:<path>")
        p.add_argument("--edge-cap", type=_positive, default=None,
                       help="max assignments to enumerate (default: $REPSHIFT_EDGE_CAP or 10000000)")

    p = sub.add_parser("build", help="build and prune the shift graph")
    common(p)
    p.add_argument("--dot", help="write the pruned graph as GraphViz DOT")
    p.add_argument("--csv", help="write the pruned adjacency matrix as CSV")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="entropy, periodic points and verdict")
    common(p)
    p.add_argument("--max-r", type=_positive, default=DEFAULT_MAX_R)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--machine", action="store_true", help="key=value output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("probe", help="scan S_2..S_N for positive entropy")
    common(p, group=False)
    p.add_argument("--max-n", type=_probe_degree, default=5)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("alexander", help="Alexander polynomial of a knot system")
    p.add_argument("--knot", required=True)
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("catalog", help="list built-in knots")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"repshift: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EdgeCapExceeded as exc:
        print(f"repshift: error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
