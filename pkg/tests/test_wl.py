import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from test_graph import graphs
from wlkit.graph import (Graph, complete_graph, cycle_graph, disjoint_union, path_graph, petersen_graph,
                         star_graph, all_pairs_distances)
from wlkit.oracles import CorpusFilter, graphs_on
from wlkit.wl import (SharedColorTable, TableMismatch, diagonal_colors, dump_json, dump_text, equivalent_k,
                      initial_coloring, joint_stable_coloring, refine_round, stable_coloring, vertex_color_classes,
                      wl_certificate)
from wlkit.errors import PreconditionError


def refines(new, old) -> bool:
    """Every class of ``new`` lies inside one class of ``old``."""
    seen = {}
    for a, b in zip(new.colors.tolist(), old.colors.tolist()):
        if seen.setdefault(a, b) != b:
            return False
    return True


class TestInitial:
    def test_triangle_two_classes(self):
        assert initial_coloring(complete_graph(3), 2).num_classes == 2

    def test_c4_three_classes(self):
        assert initial_coloring(cycle_graph(4), 2).num_classes == 3

    def test_k1_ignores_degree(self):
        assert initial_coloring(path_graph(3), 1).num_classes == 1

    def test_ids_are_initial_segment(self):
        c = initial_coloring(petersen_graph(), 3)
        assert set(c.colors.tolist()) == set(range(c.num_classes))

    def test_vertex_colors_fold_in(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)], vertex_color=[0, 1, 0])
        assert initial_coloring(g, 1).num_classes == 2


class TestRefine:
    def test_c5_one_round_stable(self):
        c = refine_round(cycle_graph(5), initial_coloring(cycle_graph(5), 2))
        assert c.num_classes == 3
        assert refine_round(cycle_graph(5), c).num_classes == 3

    def test_complete_graph_k1_unchanged(self):
        c0 = initial_coloring(complete_graph(5), 1)
        assert refine_round(complete_graph(5), c0).num_classes == 1

    def test_star_degree_split(self):
        c = refine_round(star_graph(3), initial_coloring(star_graph(3), 1))
        assert c.partition() == [[0], [1, 2, 3]]

    def test_table_bound_to_dimension(self):
        t = SharedColorTable()
        initial_coloring(cycle_graph(4), 2, t)
        with pytest.raises(TableMismatch):
            initial_coloring(cycle_graph(4), 3, t)


class TestStable:
    @pytest.mark.parametrize("g, k, classes", [
        (cycle_graph(6), 2, 4),
        (petersen_graph(), 2, 3),
        (cycle_graph(5), 2, 3),
        (path_graph(3), 2, 5),
        (Graph(1), 1, 1), (Graph(1), 2, 1), (Graph(1), 3, 1),
    ])
    def test_class_counts(self, g, k, classes):
        assert stable_coloring(g, k).num_classes == classes

    def test_c6_classes_are_distances(self):
        c = stable_coloring(cycle_graph(6), 2)
        d = all_pairs_distances(cycle_graph(6)).as_array()
        P = c.pair_matrix()
        for a in range(4):
            assert len(set(P[d == a].tolist())) == 1

    def test_vertex_classes(self):
        assert vertex_color_classes(stable_coloring(petersen_graph(), 2)) == [list(range(10))]
        assert len(vertex_color_classes(stable_coloring(star_graph(3), 2))) == 2
        assert sorted(map(sorted, vertex_color_classes(stable_coloring(path_graph(3), 2)))) == [[0, 2], [1]]
        with pytest.raises(PreconditionError):
            vertex_color_classes(stable_coloring(path_graph(3), 1))

    def test_dumps(self):
        c = stable_coloring(cycle_graph(6), 2)
        text = dump_text(c)
        assert text.splitlines()[0].endswith("classes=4")
        assert '"num_classes": 4' in dump_json(c)

    def test_max_rounds(self):
        c = stable_coloring(path_graph(7), 1, max_rounds=1)
        assert c.round <= 1


class TestEquivalence:
    def test_c6_vs_two_triangles(self, c6, two_triangles):
        assert equivalent_k(c6, two_triangles, 1)
        assert not equivalent_k(c6, two_triangles, 2)
        assert not equivalent_k(c6, two_triangles, 3)

    def test_histograms(self, c6, two_triangles):
        a, b = joint_stable_coloring(c6, two_triangles, 1)
        assert a.histogram() == b.histogram()
        a, b = joint_stable_coloring(c6, two_triangles, 2)
        assert a.histogram() != b.histogram()

    def test_k3_self(self):
        a, b = joint_stable_coloring(complete_graph(3), complete_graph(3), 2)
        assert a.histogram() == b.histogram()

    def test_unequal_orders(self):
        assert not equivalent_k(cycle_graph(5), cycle_graph(6), 1)

    def test_joint_stop_needs_union_count(self):
        # per-graph stopping would leave C4 stale under 1-WL against K4
        assert not equivalent_k(cycle_graph(4), complete_graph(4), 1)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=7), st.randoms(use_true_random=False))
    def test_isomorphism_invariance(self, g, rnd):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        h = g.relabel(perm)
        for k in (1, 2, 3):
            assert equivalent_k(g, h, k)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=8))
    def test_stable_is_never_refined(self, g):
        c = stable_coloring(g, 2)
        assert refine_round(g, c).num_classes == c.num_classes


class TestMonotonicity:
    @pytest.mark.parametrize("g", [petersen_graph(), path_graph(8), star_graph(5), cycle_graph(9)])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_rounds_refine(self, g, k):
        c = initial_coloring(g, k)
        counts = [c.num_classes]
        while True:
            nxt = refine_round(g, c)
            assert refines(nxt, c)
            if nxt.num_classes == c.num_classes:
                break
            counts.append(nxt.num_classes)
            c = nxt
        assert counts == sorted(set(counts))

    def test_dimension_monotone_on_corpus(self):
        gs = graphs_on(6)
        rng = random.Random(7)
        pairs = [tuple(rng.sample(gs, 2)) for _ in range(150)]
        for g, h in pairs:
            if not equivalent_k(g, h, 1):
                assert not equivalent_k(g, h, 2)

    def test_distance_awareness(self):
        for g in graphs_on(6, CorpusFilter.CONNECTED):
            P = stable_coloring(g, 2).pair_matrix()
            d = all_pairs_distances(g).as_array()
            for col in np.unique(P):
                assert len(np.unique(d[P == col])) == 1


class TestDeterminism:
    def test_threads_byte_identical(self):
        g = cycle_graph(30)
        a = stable_coloring(g, 2, threads=1)
        b = stable_coloring(g, 2, threads=4)
        assert a.colors.tobytes() == b.colors.tobytes()
        assert dump_json(a) == dump_json(b)

    def test_chunked_matches(self):
        g = petersen_graph()
        a = stable_coloring(g, 3)
        b = stable_coloring(g, 3, threads=3)
        assert np.array_equal(a.colors, b.colors)

    def test_repeat_runs(self):
        g = path_graph(9)
        assert dump_json(stable_coloring(g, 2)) == dump_json(stable_coloring(g, 2))


class TestCertificate:
    def test_matches_equivalence_on_sample(self):
        gs = graphs_on(6, CorpusFilter.CONNECTED)
        rng = random.Random(3)
        for _ in range(120):
            g, h = rng.sample(gs, 2)
            for k in (1, 2):
                assert (wl_certificate(g, k) == wl_certificate(h, k)) == equivalent_k(g, h, k)

    def test_known_pair(self, c6, two_triangles):
        assert wl_certificate(c6, 1) == wl_certificate(two_triangles, 1)
        assert wl_certificate(c6, 2) != wl_certificate(two_triangles, 2)

    def test_relabel_invariant(self):
        g = petersen_graph()
        assert wl_certificate(g, 2) == wl_certificate(g.relabel([3, 1, 4, 0, 5, 9, 2, 6, 8, 7]), 2)


def test_small_chunks_same_colors():
    from wlkit.wl import _run_to_fixpoint
    g = petersen_graph()
    ref = stable_coloring(g, 3)
    for threads in (1, 4):
        (c,) = _run_to_fixpoint([g], 3, SharedColorTable(), threads=threads, chunk_entries=997)
        assert c.colors.tobytes() == ref.colors.tobytes()
