"""Acceptance criteria A1 to A9.

Each test checks one criterion against the full sweep it names. A one-line
PASS/FAIL verdict per criterion is printed at the end of the session (see
``pytest_terminal_summary`` in conftest).
"""

import time

from test_wl import refines
from wlkit.oracles import graphs_on, naive_wl2
from wlkit.suites import run_suite
from wlkit.wl import dump_json, initial_coloring, refine_round, stable_coloring

MINUTE = 60.0


def _report(rep) -> str:
    lines = [rep.summary()]
    lines += [f"  witness: {v}" for v in rep.violations[:10]]
    return "\n".join(lines)


def test_A1_wl_game_equivalence():
    rep = run_suite("V1", max_n=5, threads=1)
    assert rep.passed, _report(rep)
    assert rep.wall_time < 10 * MINUTE


def test_A2_unicolored_trichotomy():
    rep = run_suite("V2", max_n=8, threads=4)
    assert rep.passed, _report(rep)
    assert rep.info["unicolored"] > 0
    assert rep.wall_time < 15 * MINUTE


def test_A3_separator_color_soundness():
    rep = run_suite("V3", max_n=7, threads=4)
    assert rep.config["cross_n"] == 6
    assert rep.passed, _report(rep)


def test_A4_component_size_encoding():
    rep = run_suite("V4", max_n=7, threads=4)
    assert rep.passed, _report(rep)


def test_A5_two_colored_cycle():
    rep = run_suite("V5", max_n=8, threads=4)
    assert rep.passed, _report(rep)


def test_A6_treewidth_two_distinguished():
    rep = run_suite("V6", max_n=7, threads=4)
    assert rep.info["treewidth_le_2"] > 0
    assert rep.passed, _report(rep)


def test_A7_cfi_lower_bound():
    # the 3-WL run is informational and not part of this criterion
    rep = run_suite("V7", threads=4, with_3wl=False)
    assert rep.passed, _report(rep)
    assert rep.info["cfi_grid3_equivalent_2"] is True
    assert rep.info["parity_pairs_ok"] == {"K3": 28, "C4": 66, "K4": 253}
    assert rep.wall_time < 20 * MINUTE


def test_A8_engine_integrity():
    start = time.perf_counter()
    for n in range(1, 8):
        for g in graphs_on(n):
            c = stable_coloring(g, 2)
            engine = sorted(sorted(c.tuple_at(i) for i in cls) for cls in c.partition())
            assert engine == sorted(naive_wl2(g)), g
            assert dump_json(c) == dump_json(stable_coloring(g, 2, threads=4))
    for g in graphs_on(6):
        for k in (1, 2):
            c = initial_coloring(g, k)
            while True:
                nxt = refine_round(g, c)
                assert refines(nxt, c)
                if nxt.num_classes == c.num_classes:
                    break
                c = nxt
    assert time.perf_counter() - start < 10 * MINUTE


def test_A9_scheme_axioms():
    rep = run_suite("V8", max_n=7, threads=4)
    assert rep.passed, _report(rep)
    assert rep.info["petersen"] == {"p1_11": 0, "p2_11": 1, "brute": [0, 1]}
