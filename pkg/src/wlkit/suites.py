"""Theorem-verification suites V1..V8.

Each suite sweeps a corpus, checks one claimed property per graph (or pair
of graphs) and collects counterexamples as self-contained witnesses: graph6
strings plus the offending tuples or colors. Per-graph work is pure and runs
in an optional process pool; the report is assembled in the parent process
in corpus order, so the JSON output does not depend on ``threads``.
"""

from __future__ import annotations

import itertools
import json
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable

from .cfi import (cfi_graph, grid, grid_plus_decomposition, grid_plus_properties,
                  lift_decomposition_to_cfi)
from .connectivity import (component_size_after_removal, enumerate_separators,
                           find_component_size_violation, find_cross_component_size_violation,
                           find_cross_separator_violation, find_separator_color_violation)
from .errors import PreconditionError, ResourceGuardError, TheoremViolation
from .game import GAME_MAX_N, GamePosition, GameSolver, verify_game_wl_correspondence
from .graph import Graph, complete_graph, cycle_graph, emit_graph6, parse_graph6, petersen_graph
from .oracles import BUILTIN_MAX_N, CorpusFilter, CorpusSpec, brute_isomorphic, enumerate_corpus
from .schemes import (brute_intersection_number, check_distance_multiset_lemma, classify_constituent,
                      configuration_of, constituent_graph, row_sum_consistent, two_color_cycle_check,
                      verify_coherence, verify_scheme_axioms)
from .treewidth import exact_treewidth, validate_decomposition
from .wl import diagonal_colors, equivalent_k, stable_coloring, wl_certificate

log = logging.getLogger(__name__)

SUITES = ("V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8")
PACKAGED_MAX_N = 8
SUITE_MAX_N = {"V1": GAME_MAX_N, "V2": 12, "V3": 12, "V4": 12, "V5": 12, "V6": 14, "V8": 12}
DEFAULT_MAX_N = {"V1": 5, "V2": 8, "V3": 7, "V4": 7, "V5": 8, "V6": 7, "V8": 7}
DEFAULT_CROSS_N = 6
GAME_CHECK_MAX_N = 5


@dataclass
class SuiteReport:
    suite_id: str
    corpus: str
    graphs_checked: int
    violations: list[dict]
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "suite_id": self.suite_id,
            "corpus": self.corpus,
            "graphs_checked": self.graphs_checked,
            "passed": self.passed,
            "violations": self.violations,
            "config": self.config,
            "info": self.info,
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteReport":
        rep = cls(d["suite_id"], d["corpus"], d["graphs_checked"], list(d["violations"]),
                  float(d.get("wall_time", 0.0)), dict(d.get("config", {})), dict(d.get("info", {})))
        if rep.passed != d.get("passed", rep.passed):
            raise ValueError("report 'passed' flag disagrees with its violation list")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "SuiteReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"{self.suite_id}: {status}; {self.graphs_checked} checked; corpus {self.corpus}; {self.wall_time:.1f}s"


# ---------------------------------------------------------------------------
# plumbing


def pool_map(fn: Callable, items: list, threads: int = 1) -> list:
    """Order-preserving map, fanned out over processes when ``threads > 1``."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def packaged_corpus_path(n: int = PACKAGED_MAX_N) -> str:
    return str(resources.files("wlkit") / "data" / f"graphs{n}.g6")


def corpus_graphs(max_n: int, flt: CorpusFilter, source: str | None = None, min_n: int = 1) -> tuple[str, list[Graph]]:
    """Graphs for a sweep plus a short description of where they came from.

    Without ``source`` the built-in enumeration covers ``n <= 7`` and the
    packaged graph6 file supplies ``n = 8``.
    """
    if source is not None:
        spec = CorpusSpec(max_n, flt, source, min_n)
        return spec.describe(), list(enumerate_corpus(spec))
    if max_n > PACKAGED_MAX_N:
        raise ResourceGuardError(
            f"default corpus covers n <= {PACKAGED_MAX_N}; pass --corpus FILE.g6 for larger sweeps")
    graphs = list(enumerate_corpus(CorpusSpec(min(max_n, BUILTIN_MAX_N), flt, None, min_n)))
    desc = f"builtin:n={min_n}..{min(max_n, BUILTIN_MAX_N)}:{flt.value}"
    if max_n > BUILTIN_MAX_N:
        path = packaged_corpus_path()
        graphs += list(enumerate_corpus(CorpusSpec(max_n, flt, path, max(min_n, BUILTIN_MAX_N + 1))))
        desc += f"+packaged:n={PACKAGED_MAX_N}:{flt.value}"
    return desc, graphs


def _same_order_pairs(graphs: list[Graph], with_self: bool) -> list[tuple[str, str]]:
    by_n: dict[int, list[str]] = {}
    for g in graphs:
        by_n.setdefault(g.n, []).append(emit_graph6(g))
    pairs = []
    for n in sorted(by_n):
        gs = by_n[n]
        pairs += [(gs[i], gs[j]) for i in range(len(gs)) for j in range(i if with_self else i + 1, len(gs))]
    return pairs


def _check_bound(suite: str, max_n: int) -> None:
    if max_n > SUITE_MAX_N[suite]:
        raise ResourceGuardError(f"suite {suite} is limited to n <= {SUITE_MAX_N[suite]} (got {max_n})")


def _flatten(results: Iterable[list[dict]]) -> list[dict]:
    return [v for r in results for v in r]


# ---------------------------------------------------------------------------
# per-item workers (top level so they pickle)


def _v1_pair(pair: tuple[str, str]) -> list[dict]:
    g, h = parse_graph6(pair[0]), parse_graph6(pair[1])
    out = []
    for k in (1, 2):
        if not verify_game_wl_correspondence(g, h, k):
            out.append({"check": "game_wl", "k": k, "graph6": list(pair),
                        "wl_equivalent": equivalent_k(g, h, k)})
    return out


def _v2_graph(g6: str) -> dict:
    g = parse_graph6(g6)
    out: dict = {"violations": [], "verdict": None}
    if not check_distance_multiset_lemma(g):
        out["violations"].append({"check": "distance_multiset_lemma", "graph6": g6})
    if len(set(diagonal_colors(stable_coloring(g, 2)))) == 1:
        try:
            cls = classify_constituent(g)
            out["verdict"] = cls.verdict.value
        except TheoremViolation as exc:
            out["violations"].append({"check": "trichotomy", "graph6": g6, "detail": str(exc)})
    return out


def _v3_graph(g6: str) -> list[dict]:
    g = parse_graph6(g6)
    out = []
    for k in (2, 3):
        v = find_separator_color_violation(g, k)
        if v is not None:
            out.append({"check": f"separator_purity_k{k}", "graph6": g6, **v})
    return out


def _v3_pair(pair: tuple[str, str]) -> list[dict]:
    v = find_cross_separator_violation(parse_graph6(pair[0]), parse_graph6(pair[1]))
    return [] if v is None else [{"check": "cross_separator", "graph6": list(pair), **v}]


def _v4_graph(g6: str) -> list[dict]:
    v = find_component_size_violation(parse_graph6(g6))
    return [] if v is None else [{"check": "component_size", "graph6": g6, **v}]


def _v4_pair(pair: tuple[str, str]) -> list[dict]:
    v = find_cross_component_size_violation(parse_graph6(pair[0]), parse_graph6(pair[1]))
    return [] if v is None else [{"check": "cross_component_size", "graph6": list(pair), **v}]


def _game_triple_pair(pair: tuple[str, str]) -> list[dict]:
    """Different s-values at a pebbled triple must give Spoiler the win in BP_3."""
    g, h = parse_graph6(pair[0]), parse_graph6(pair[1])
    solver = GameSolver(g, h, 3)
    win = solver.winning_positions(3)
    n = g.n
    s_g = {t: component_size_after_removal(g, t[:2], t[2])
           for t in itertools.product(range(n), repeat=3) if t[2] not in t[:2]}
    s_h = {t: component_size_after_removal(h, t[:2], t[2])
           for t in itertools.product(range(n), repeat=3) if t[2] not in t[:2]}
    for a, sa in s_g.items():
        ra = (a[0] * n + a[1]) * n + a[2]
        for b, sb in s_h.items():
            if sa != sb and win[ra, (b[0] * n + b[1]) * n + b[2]]:
                return [{"check": "game_triple", "graph6": list(pair), "left": list(a), "right": list(b),
                         "s_left": sa, "s_right": sb}]
    return []


def _v5_graph(g6: str) -> dict:
    g = parse_graph6(g6)
    applies, holds = two_color_cycle_check(g)
    out = {"applies": applies, "violations": []}
    if not holds:
        out["violations"].append({"check": "two_color_cycle", "graph6": g6, "separator": list(_covering_separator(g)),
                                  "diagonal_colors": diagonal_colors(stable_coloring(g, 2))})
    return out


def _covering_separator(g: Graph) -> tuple:
    """A 2-separator whose two diagonal colors cover every vertex color, if any."""
    diag = diagonal_colors(stable_coloring(g, 2))
    palette = set(diag)
    for a, b in enumerate_separators(g, 2).separators:
        if palette <= {diag[a], diag[b]}:
            return a, b
    return ()


def _v6_graph(g6: str) -> tuple[int, tuple | None]:
    g = parse_graph6(g6)
    tw = exact_treewidth(g)
    return tw, (wl_certificate(g, 2) if tw <= 2 else None)


def _v8_graph(g6: str) -> dict:
    g = parse_graph6(g6)
    cfg = configuration_of(g)
    out: dict = {"violations": [], "scheme": False, "verdicts": []}
    if not verify_coherence(cfg):
        out["violations"].append({"check": "coherence", "graph6": g6})
    if not row_sum_consistent(cfg):
        out["violations"].append({"check": "row_sums", "graph6": g6})
    if len(cfg.diagonal_relations) == 1:
        out["scheme"] = True
        if not verify_scheme_axioms(cfg):
            out["violations"].append({"check": "scheme_axioms", "graph6": g6})
        for i in range(1, len(cfg.relations)):
            cg = None
            try:
                cg = constituent_graph(cfg, i)
                out["verdicts"].append(classify_constituent(cg).verdict.value)
            except (TheoremViolation, PreconditionError) as exc:
                out["violations"].append({"check": "constituent", "graph6": g6, "relation": i,
                                          "constituent_graph6": emit_graph6(cg) if cg else None,
                                          "detail": str(exc)})
    return out


# ---------------------------------------------------------------------------
# suites


def run_v1(max_n: int | None = None, source: str | None = None, threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V1"] if max_n is None else max_n
    _check_bound("V1", max_n)
    desc, graphs = corpus_graphs(max_n, CorpusFilter.CONNECTED, source)
    g6s = [emit_graph6(g) for g in graphs]
    pairs = [(g6s[i], g6s[j]) for i in range(len(g6s)) for j in range(i, len(g6s))]
    viol = _flatten(pool_map(_v1_pair, pairs, threads))
    return SuiteReport("V1", desc, len(graphs), viol, config={"max_n": max_n, "k": [1, 2]},
                       info={"pairs_checked": len(pairs)})


def run_v2(max_n: int | None = None, source: str | None = None, threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V2"] if max_n is None else max_n
    _check_bound("V2", max_n)
    desc, graphs = corpus_graphs(max_n, CorpusFilter.CONNECTED, source)
    res = pool_map(_v2_graph, [emit_graph6(g) for g in graphs], threads)
    verdicts = Counter(r["verdict"] for r in res if r["verdict"] is not None)
    return SuiteReport("V2", desc, len(graphs), _flatten(r["violations"] for r in res),
                       config={"max_n": max_n},
                       info={"unicolored": sum(verdicts.values()), "verdicts": dict(sorted(verdicts.items()))})


def run_v3(max_n: int | None = None, cross_n: int = DEFAULT_CROSS_N, source: str | None = None,
           threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V3"] if max_n is None else max_n
    _check_bound("V3", max(max_n, cross_n))
    desc, graphs = corpus_graphs(max_n, CorpusFilter.CONNECTED, source)
    viol = _flatten(pool_map(_v3_graph, [emit_graph6(g) for g in graphs], threads))
    _, bic = corpus_graphs(cross_n, CorpusFilter.BICONNECTED, source)
    pairs = _same_order_pairs(bic, with_self=False)
    viol += _flatten(pool_map(_v3_pair, pairs, threads))
    return SuiteReport("V3", desc, len(graphs), viol, config={"max_n": max_n, "cross_n": cross_n, "k": [2, 3]},
                       info={"cross_pairs": len(pairs)})


def run_v4(max_n: int | None = None, cross_n: int = DEFAULT_CROSS_N, source: str | None = None,
           threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V4"] if max_n is None else max_n
    _check_bound("V4", max(max_n, cross_n))
    desc, graphs = corpus_graphs(max_n, CorpusFilter.BICONNECTED, source)
    viol = _flatten(pool_map(_v4_graph, [emit_graph6(g) for g in graphs], threads))
    _, bic = corpus_graphs(cross_n, CorpusFilter.BICONNECTED, source)
    pairs = _same_order_pairs(bic, with_self=False)
    viol += _flatten(pool_map(_v4_pair, pairs, threads))
    _, small = corpus_graphs(min(GAME_CHECK_MAX_N, max_n), CorpusFilter.CONNECTED, source)
    game_pairs = _same_order_pairs(small, with_self=True)
    viol += _flatten(pool_map(_game_triple_pair, game_pairs, threads))
    return SuiteReport("V4", desc, len(graphs), viol,
                       config={"max_n": max_n, "cross_n": cross_n, "game_check_max_n": min(GAME_CHECK_MAX_N, max_n)},
                       info={"cross_pairs": len(pairs), "game_pairs": len(game_pairs)})


def run_v5(max_n: int | None = None, source: str | None = None, threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V5"] if max_n is None else max_n
    _check_bound("V5", max_n)
    desc, graphs = corpus_graphs(max_n, CorpusFilter.BICONNECTED, source)
    res = pool_map(_v5_graph, [emit_graph6(g) for g in graphs], threads)
    return SuiteReport("V5", desc, len(graphs), _flatten(r["violations"] for r in res),
                       config={"max_n": max_n}, info={"applicable": sum(r["applies"] for r in res)})


def run_v6(max_n: int | None = None, source: str | None = None, threads: int = 1) -> SuiteReport:
    """Graphs with equal 2-WL certificates are 2-WL equivalent; since the
    corpus holds one graph per isomorphism class, any group of two or more
    treewidth-2 graphs of equal order is a failure to identify."""
    max_n = DEFAULT_MAX_N["V6"] if max_n is None else max_n
    _check_bound("V6", max_n)
    desc, graphs = corpus_graphs(max_n, CorpusFilter.CONNECTED, source)
    g6s = [emit_graph6(g) for g in graphs]
    res = pool_map(_v6_graph, g6s, threads)
    groups: dict[tuple, list[str]] = {}
    for g6, g, (tw, cert) in zip(g6s, graphs, res):
        if cert is not None:
            groups.setdefault((g.n, cert), []).append(g6)
    viol = []
    for members in groups.values():
        for a, b in itertools.combinations(members, 2):
            ga, gb = parse_graph6(a), parse_graph6(b)
            if brute_isomorphic(ga, gb)[0]:
                continue
            viol.append({"check": "tw2_identified", "graph6": [a, b], "equivalent_2": equivalent_k(ga, gb, 2)})
    low = sum(1 for tw, _ in res if tw <= 2)
    return SuiteReport("V6", desc, len(graphs), viol, config={"max_n": max_n, "max_treewidth": 2},
                       info={"treewidth_le_2": low,
                             "treewidth_histogram": {str(k): v for k, v in sorted(Counter(t for t, _ in res).items())}})


def run_v7(threads: int = 1, with_3wl: bool = True) -> SuiteReport:
    viol: list[dict] = []
    info: dict = {}
    checked = 0

    g = cfi_graph(grid(3))
    h = cfi_graph(grid(3), [grid(3).sorted_edges()[0]])
    eq2 = equivalent_k(g.graph, h.graph, 2, threads=threads)
    info["cfi_grid3_equivalent_2"] = eq2
    checked += 2
    if not eq2:
        viol.append({"check": "cfi_equivalence_k2", "graph6": [g.graph6(), h.graph6()]})

    parity = {}
    for name, base in (("K3", complete_graph(3)), ("C4", cycle_graph(4)), ("K4", complete_graph(4))):
        edges = base.sorted_edges()
        twists = [()] + [(e,) for e in edges] + list(itertools.combinations(edges, 2))
        graphs = [cfi_graph(base, t).graph for t in twists]
        n_ok = 0
        for i, j in itertools.combinations_with_replacement(range(len(twists)), 2):
            iso = brute_isomorphic(graphs[i], graphs[j])[0]
            expect = (len(twists[i]) - len(twists[j])) % 2 == 0
            checked += 1
            if iso != expect:
                viol.append({"check": "cfi_parity", "base": name, "twist_a": [list(e) for e in twists[i]],
                             "twist_b": [list(e) for e in twists[j]], "isomorphic": iso})
            else:
                n_ok += 1
        parity[name] = n_ok
    info["parity_pairs_ok"] = parity

    plus_widths = {}
    for n in range(2, 6):
        sg, td = grid_plus_decomposition(n)
        ok, w = validate_decomposition(sg.graph, td)
        props = grid_plus_properties(sg, td)
        plus_widths[str(n)] = w
        checked += 1
        if not (ok and w <= n + 2 and props and td.tree.n == 4 * n * n):
            viol.append({"check": "grid_plus_decomposition", "n": n, "valid": ok, "width": w,
                         "properties": props, "bound": n + 2})
    info["grid_plus_widths"] = plus_widths

    lift_widths = {}
    for n in range(2, 5):
        base = grid(n)
        for label, twist in (("untwisted", ()), ("twisted", [base.sorted_edges()[0]])):
            inst = cfi_graph(base, twist)
            td = lift_decomposition_to_cfi(n, inst)
            ok, w = validate_decomposition(inst.graph, td)
            lift_widths[f"{n}/{label}"] = w
            checked += 1
            if not (ok and w <= 2 * n + 5):
                viol.append({"check": "lifted_decomposition", "n": n, "twist": label, "valid": ok,
                             "width": w, "bound": 2 * n + 5})
    info["lifted_widths"] = lift_widths
    # scaled lower-bound instance: k = 2 uses the 3x3 grid, treewidth bound 2k + 7
    info["k2_instance_treewidth_bound"] = 2 * 2 + 7
    info["k2_instance_certified_width"] = max(lift_widths["3/untwisted"], lift_widths["3/twisted"])

    if with_3wl:
        # not asserted: tw(grid(3)) = 3 is below the k + 1 = 4 the equivalence theorem needs for k = 3
        info["cfi_grid3_equivalent_3"] = equivalent_k(g.graph, h.graph, 3, threads=threads)
    return SuiteReport("V7", "constructions:cfi+grids", checked, viol,
                       config={"with_3wl": with_3wl}, info=info)


def run_v8(max_n: int | None = None, source: str | None = None, threads: int = 1) -> SuiteReport:
    max_n = DEFAULT_MAX_N["V8"] if max_n is None else max_n
    _check_bound("V8", max_n)
    desc, graphs = corpus_graphs(max_n, CorpusFilter.CONNECTED, source)
    res = pool_map(_v8_graph, [emit_graph6(g) for g in graphs], threads)
    viol = _flatten(r["violations"] for r in res)

    pet = configuration_of(petersen_graph())
    edge_rel = 1 + [int(r.sum()) for r in pet.relations[1:]].index(30)
    non_rel = 3 - edge_rel
    p1 = pet.intersection_numbers[(edge_rel, edge_rel, edge_rel)]
    p2 = pet.intersection_numbers[(edge_rel, edge_rel, non_rel)]
    b1 = brute_intersection_number(pet, edge_rel, edge_rel, edge_rel)
    b2 = brute_intersection_number(pet, edge_rel, edge_rel, non_rel)
    if (p1, p2) != (0, 1) or (b1, b2) != (0, 1) or not verify_scheme_axioms(pet):
        viol.append({"check": "petersen_intersection_numbers", "extracted": [p1, p2], "brute": [b1, b2]})
    verdicts = Counter(v for r in res for v in r["verdicts"])
    return SuiteReport("V8", desc, len(graphs), viol, config={"max_n": max_n},
                       info={"schemes": sum(r["scheme"] for r in res),
                             "constituent_verdicts": dict(sorted(verdicts.items())),
                             "petersen": {"p1_11": p1, "p2_11": p2, "brute": [b1, b2]}})


def run_suite(suite_id: str, *, max_n: int | None = None, source: str | None = None, threads: int = 1,
              with_3wl: bool = True) -> SuiteReport:
    suite_id = suite_id.upper()
    if suite_id not in SUITES:
        raise PreconditionError(f"unknown suite {suite_id!r}; choose from {', '.join(SUITES)}", code="UNKNOWN_SUITE")
    start = time.perf_counter()
    if suite_id == "V7":
        rep = run_v7(threads=threads, with_3wl=with_3wl)
    else:
        runner = {"V1": run_v1, "V2": run_v2, "V3": run_v3, "V4": run_v4, "V5": run_v5,
                  "V6": run_v6, "V8": run_v8}[suite_id]
        rep = runner(max_n=max_n, source=source, threads=threads)
    rep.wall_time = time.perf_counter() - start
    log.info(rep.summary())
    return rep
