"""``wlkit`` command line.

Exit codes: 0 success, 1 a suite or check found violations, 2 usage or
input errors, 3 a resource guard was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cfi import cfi_graph, grid, grid_plus_decomposition, lift_decomposition_to_cfi, subdivided_grid
from .errors import ResourceGuardError, TheoremViolation, WLKitError
from .game import GamePosition, solve_game
from .graph import (Graph, complete_graph, cycle_graph, emit_edge_list, emit_graph6, parse_edge_list,
                    parse_graph6, path_graph, petersen_graph, star_graph)
from .oracles import CorpusFilter, CorpusSpec, enumerate_corpus
from .schemes import configuration_of
from .suites import SUITES, run_suite
from .treewidth import (TreeDecomposition, decomposition_problems, exact_treewidth,
                        treewidth_by_recursion)
from .wl import dump_json, dump_text, equivalent_k, stable_coloring

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

log = logging.getLogger("wlkit")


# ---------------------------------------------------------------------------
# input helpers


def read_graph(path: str, fmt: str = "auto") -> Graph:
    """Load one graph; ``auto`` picks graph6 for ``.g6`` files, else edge list."""
    text = Path(path).read_text()
    if fmt == "auto":
        fmt = "graph6" if path.endswith((".g6", ".graph6")) else "edgelist"
    if fmt == "graph6":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise WLKitError(f"expected exactly one graph6 line in {path}, found {len(lines)}", code="MALFORMED_LINE")
        return parse_graph6(lines[0])
    return parse_edge_list(text)


def named_graph(spec: str) -> Graph:
    """Graphs named on the command line: ``k3``, ``c5``, ``path:4``, ``grid:3``,
    ``star:3``, ``petersen``, or ``file:PATH``."""
    s = spec.strip().lower()
    if s.startswith("file:"):
        return read_graph(spec[5:])
    if s == "petersen":
        return petersen_graph()
    name, _, arg = s.partition(":")
    if not arg:
        name, arg = s[:1], s[1:]
    try:
        size = int(arg)
    except ValueError:
        raise WLKitError(f"cannot read graph spec {spec!r}", code="BAD_GRAPH_SPEC") from None
    builders = {"k": complete_graph, "complete": complete_graph, "c": cycle_graph, "cycle": cycle_graph,
                "p": path_graph, "path": path_graph, "grid": grid, "star": star_graph}
    if name not in builders:
        raise WLKitError(f"unknown graph family in {spec!r}", code="BAD_GRAPH_SPEC")
    return builders[name](size)


def parse_twist(spec: str, base: Graph) -> list[tuple[int, int]]:
    """``none``, ``first-edge``, or a comma list ``u-v,u-v``."""
    s = spec.strip().lower()
    if s in ("none", ""):
        return []
    if s == "first-edge":
        return base.sorted_edges()[:1]
    try:
        return [tuple(int(x) for x in part.split("-")) for part in s.split(",")]
    except ValueError:
        raise WLKitError(f"cannot read twist spec {spec!r}", code="BAD_TWIST_SPEC") from None


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_graph(g: Graph, fmt: str) -> str:
    return emit_graph6(g) + "\n" if fmt == "graph6" else emit_edge_list(g)


# ---------------------------------------------------------------------------
# subcommands


def cmd_refine(args) -> int:
    g = read_graph(args.input, args.format)
    c = stable_coloring(g, args.k, threads=args.threads, max_rounds=args.rounds)
    _write(dump_json(c) + "\n" if args.json else dump_text(c), args.out)
    print(f"refine: n={g.n} k={args.k} classes={c.num_classes} rounds={c.round}", file=sys.stderr)
    return EXIT_OK


def cmd_distinguish(args) -> int:
    g = read_graph(args.g, args.format)
    h = read_graph(args.h, args.format)
    same = equivalent_k(g, h, args.k, threads=args.threads)
    print("EQUIVALENT" if same else "DISTINGUISHED")
    return EXIT_OK


def cmd_cfi(args) -> int:
    base = named_graph(args.base)
    inst = cfi_graph(base, parse_twist(args.twist, base))
    if args.out:
        Path(args.out + ".g6").write_text(inst.graph6() + "\n")
        Path(args.out + ".json").write_text(inst.provenance_json() + "\n")
        print(f"cfi: wrote {args.out}.g6 and {args.out}.json", file=sys.stderr)
    else:
        print(inst.graph6())
    print(f"cfi: n={inst.graph.n} m={inst.graph.m} twist={sorted(inst.twist)}", file=sys.stderr)
    return EXIT_OK


def cmd_grid(args) -> int:
    if args.subdivided:
        g = subdivided_grid(args.n).graph
    else:
        g = grid(args.n)
    _write(_emit_graph(g, args.format), args.out)
    print(f"grid: n={g.n} m={g.m}", file=sys.stderr)
    return EXIT_OK


def cmd_treedec(args) -> int:
    if args.lift == "none":
        sg, td = grid_plus_decomposition(args.n)
        target = sg.graph
    else:
        base = grid(args.n)
        inst = cfi_graph(base, base.sorted_edges()[:1] if args.lift == "twisted" else [])
        td = lift_decomposition_to_cfi(args.n, inst)
        target = inst.graph
    _write(td.to_json() + "\n", args.out)
    if args.graph_out:
        Path(args.graph_out).write_text(emit_graph6(target) + "\n")
    print(f"treedec: {td.tree.n} nodes, width {td.width}", file=sys.stderr)
    return EXIT_OK


def cmd_validate_td(args) -> int:
    g = read_graph(args.graph, args.format)
    td = TreeDecomposition.from_json(Path(args.td).read_text())
    problems = decomposition_problems(g, td)
    print(json.dumps({"valid": not problems, "width": td.width, "problems": problems[:20]}, indent=1))
    return EXIT_OK if not problems else EXIT_VIOLATION


def cmd_treewidth(args) -> int:
    g = read_graph(args.input, args.format)
    result = {}
    if args.method in ("dp", "both"):
        result["dp"] = exact_treewidth(g)
    if args.method in ("recursion", "both"):
        result["recursion"] = treewidth_by_recursion(g)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK if len(set(result.values())) == 1 else EXIT_VIOLATION


def cmd_scheme(args) -> int:
    g = read_graph(args.input, args.format)
    cfg = configuration_of(g)
    d = cfg.to_dict()
    if not args.full:
        d["intersection_numbers"] = [row for row in d["intersection_numbers"] if row[3] is not None and row[3] > 0]
    _write(json.dumps(d, indent=1) + "\n", args.out)
    print(f"scheme: {cfg.d + 1} relations, association scheme: {d['is_association_scheme']}", file=sys.stderr)
    return EXIT_OK


def cmd_game(args) -> int:
    g = read_graph(args.g, args.format)
    h = read_graph(args.h, args.format)
    verdict = solve_game(g, h, args.k, GamePosition())
    print(verdict.winner.value if not verdict.reason else f"{verdict.winner.value} ({verdict.reason})")
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, max_n=args.max_n, source=args.corpus, threads=args.threads,
                    with_3wl=not args.no_3wl)
    _write(rep.to_json(timing=args.timing) + "\n", args.out)
    print(rep.summary(), file=sys.stderr)
    for v in rep.violations[:10]:
        print(f"  witness: {json.dumps(v, sort_keys=True)}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_corpus(args) -> int:
    spec = CorpusSpec(args.max_n, CorpusFilter(args.filter), args.source, args.min_n)
    lines = [emit_graph6(g) for g in enumerate_corpus(spec)]
    _write("".join(x + "\n" for x in lines), args.out)
    print(f"corpus: {len(lines)} graphs ({spec.describe()})", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wlkit", description="Weisfeiler-Leman toolkit and theorem-check suites.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    fmt = dict(choices=["auto", "edgelist", "graph6"], default="auto", help="input format (default: by extension)")

    s = sub.add_parser("refine", help="stable k-WL coloring of one graph")
    s.add_argument("--input", required=True)
    s.add_argument("--format", **fmt)
    s.add_argument("--k", type=int, choices=[1, 2, 3], default=2)
    s.add_argument("--rounds", type=int, default=None, help="stop after at most N rounds")
    s.add_argument("--json", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("distinguish", help="does k-WL distinguish two graphs?")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--k", type=int, choices=[1, 2, 3], default=2)
    s.add_argument("--format", **fmt)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("cfi", help="build a CFI instance")
    s.add_argument("--base", required=True, help="k3, c4, grid:3, path:3, petersen, file:PATH ...")
    s.add_argument("--twist", default="none", help="none, first-edge, or u-v,u-v")
    s.add_argument("--out", help="write OUT.g6 and OUT.json instead of printing graph6")
    s.set_defaults(func=cmd_cfi)

    s = sub.add_parser("grid", help="grid or subdivided grid")
    s.add_argument("n", type=int)
    s.add_argument("--subdivided", action="store_true")
    s.add_argument("--format", choices=["edgelist", "graph6"], default="graph6")
    s.add_argument("--out")
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("treedec", help="explicit decomposition of the subdivided grid or its CFI lift")
    s.add_argument("n", type=int)
    s.add_argument("--lift", choices=["none", "untwisted", "twisted"], default="none")
    s.add_argument("--out")
    s.add_argument("--graph-out", help="also write the decomposed graph as graph6")
    s.set_defaults(func=cmd_treedec)

    s = sub.add_parser("validate-td", help="check a JSON tree decomposition against a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--td", required=True)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_validate_td)

    s = sub.add_parser("treewidth", help="exact treewidth of a small graph")
    s.add_argument("--input", required=True)
    s.add_argument("--format", **fmt)
    s.add_argument("--method", choices=["dp", "recursion", "both"], default="dp")
    s.set_defaults(func=cmd_treewidth)

    s = sub.add_parser("scheme", help="coherent configuration of the stable 2-WL coloring")
    s.add_argument("--input", required=True)
    s.add_argument("--format", **fmt)
    s.add_argument("--full", action="store_true", help="list every intersection number, zeros included")
    s.add_argument("--out")
    s.set_defaults(func=cmd_scheme)

    s = sub.add_parser("game", help="solve the bijective k-pebble game")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--k", type=int, default=3, help="number of pebble pairs")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("verify", help="run a theorem-check suite")
    s.add_argument("suite", type=str.upper, choices=SUITES)
    s.add_argument("--max-n", type=int, default=None)
    s.add_argument("--corpus", default=None, help="graph6 file replacing the default corpus")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    s.add_argument("--no-3wl", action="store_true", help="V7: skip the informational 3-WL run")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", help="list graphs up to isomorphism as graph6")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--min-n", type=int, default=1)
    s.add_argument("--filter", choices=[f.value for f in CorpusFilter], default="all")
    s.add_argument("--source", default=None, help="graph6 file instead of the built-in enumeration")
    s.add_argument("--out")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except TheoremViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (WLKitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
