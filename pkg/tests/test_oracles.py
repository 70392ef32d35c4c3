import random

import networkx as nx
import pytest

from conftest import from_nx, to_nx
from wlkit.cfi import cfi_graph
from wlkit.errors import GraphFormatError, ResourceGuardError
from wlkit.graph import (complete_graph, cycle_graph, emit_graph6, path_graph, petersen_graph,
                         read_graph6_file)
from wlkit.oracles import (CorpusFilter, CorpusSpec, brute_isomorphic, enumerate_corpus, extend_by_vertex,
                           graphs_on, is_isomorphism, naive_wl2)
from wlkit.wl import stable_coloring

# counts produced by the built-in enumeration and cross-checked against the
# networkx graph atlas below
GOLDEN_ALL = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}
GOLDEN_CONNECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}
GOLDEN_BICONNECTED = {3: 1, 4: 3, 5: 10, 6: 56, 7: 468}


def atlas_classes(n):
    return [G for G in nx.graph_atlas_g() if G.number_of_nodes() == n]


class TestIsomorphism:
    def test_relabelled_cycle(self):
        g = cycle_graph(6)
        ok, perm = brute_isomorphic(g, g.relabel([2, 5, 1, 0, 4, 3]))
        assert ok and is_isomorphism(g, g.relabel([2, 5, 1, 0, 4, 3]), perm)

    def test_cycle_vs_triangles(self, c6, two_triangles):
        assert brute_isomorphic(c6, two_triangles) == (False, None)

    def test_cfi_twist(self):
        base = complete_graph(3)
        assert not brute_isomorphic(cfi_graph(base).graph, cfi_graph(base, [(0, 1)]).graph)[0]

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            brute_isomorphic(cycle_graph(21), cycle_graph(21))

    def test_pruning_never_changes_verdict(self):
        gs = graphs_on(5)
        rng = random.Random(11)
        for _ in range(200):
            g, h = rng.choice(gs), rng.choice(gs)
            perm = list(range(h.n))
            rng.shuffle(perm)
            h = h.relabel(perm)
            assert brute_isomorphic(g, h)[0] == brute_isomorphic(g, h, prune=False)[0]

    def test_equivalence_relation_spot_checks(self):
        gs = graphs_on(5, CorpusFilter.CONNECTED)
        for g in gs:
            assert brute_isomorphic(g, g)[0]
        rng = random.Random(5)
        for _ in range(100):
            g, h = rng.sample(gs, 2)
            assert brute_isomorphic(g, h)[0] == brute_isomorphic(h, g)[0] is False

    def test_agrees_with_networkx(self):
        rng = random.Random(2)
        for _ in range(60):
            G = nx.gnp_random_graph(8, 0.4, seed=rng.randrange(10 ** 6))
            H = nx.gnp_random_graph(8, 0.4, seed=rng.randrange(10 ** 6)) if rng.random() < .5 else nx.relabel_nodes(
                G, dict(zip(G.nodes(), rng.sample(list(G.nodes()), 8))))
            assert brute_isomorphic(from_nx(G), from_nx(H))[0] == nx.is_isomorphic(G, H)


class TestNaiveWL:
    def test_c5(self):
        assert len(naive_wl2(cycle_graph(5))) == 3

    def test_k4(self):
        assert len(naive_wl2(complete_graph(4))) == 2

    def test_p3_golden(self):
        # frozen from the oracle's first run
        classes = naive_wl2(path_graph(3))
        assert len(classes) == 5
        assert classes[0] == [(0, 0), (2, 2)]

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            naive_wl2(cycle_graph(13))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_engine(self, n):
        for g in graphs_on(n):
            c = stable_coloring(g, 2)
            engine = sorted(sorted(c.tuple_at(i) for i in cls) for cls in c.partition())
            assert engine == sorted(naive_wl2(g))


class TestCorpus:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_counts(self, n):
        assert len(graphs_on(n)) == GOLDEN_ALL[n]
        assert len(graphs_on(n, CorpusFilter.CONNECTED)) == GOLDEN_CONNECTED[n]
        if n >= 3:
            assert len(graphs_on(n, CorpusFilter.BICONNECTED)) == GOLDEN_BICONNECTED[n]

    def test_small_examples(self):
        assert len(list(enumerate_corpus(CorpusSpec(4)))) == 1 + 2 + 4 + 11
        assert len(graphs_on(4)) == 11
        conn3 = graphs_on(3, CorpusFilter.CONNECTED)
        assert sorted(g.m for g in conn3) == [2, 3]

    @pytest.mark.parametrize("n", range(1, 8))
    def test_atlas_agreement(self, n):
        ours = sorted(nx.weisfeiler_lehman_graph_hash(to_nx(g)) for g in graphs_on(n))
        ref = sorted(nx.weisfeiler_lehman_graph_hash(G) for G in atlas_classes(n))
        assert ours == ref

    def test_builtin_guard(self):
        with pytest.raises(ResourceGuardError):
            CorpusSpec(8)

    def test_graph6_source(self, tmp_path):
        p = tmp_path / "five.g6"
        p.write_text("".join(emit_graph6(g) + "\n" for g in graphs_on(4)[:5]))
        assert len(list(enumerate_corpus(CorpusSpec(10, source=str(p))))) == 5

    def test_bad_graph6_source(self, tmp_path):
        p = tmp_path / "bad.g6"
        p.write_text("C~\n~~\n")
        with pytest.raises(GraphFormatError):
            list(enumerate_corpus(CorpusSpec(10, source=str(p))))

    def test_deterministic_order(self):
        assert [emit_graph6(g) for g in graphs_on(5)] == [emit_graph6(g) for g in extend_sorted(5)]

    def test_packaged_n8_is_duplicate_free(self):
        from wlkit.suites import packaged_corpus_path
        gs = list(read_graph6_file(packaged_corpus_path()))
        assert len(gs) == 12346
        assert sum(nx.is_connected(to_nx(g)) for g in gs) == 11117
        assert len({emit_graph6(g) for g in gs}) == len(gs)

    @pytest.mark.slow
    def test_packaged_n8_regenerates(self):
        from wlkit.suites import packaged_corpus_path
        regenerated = extend_by_vertex(list(graphs_on(7)))
        shipped = list(read_graph6_file(packaged_corpus_path()))
        assert len(regenerated) == len(shipped) == 12346


def extend_sorted(n):
    gs = extend_by_vertex(graphs_on(n - 1))
    return sorted(gs, key=lambda g: (g.m, emit_graph6(g)))
