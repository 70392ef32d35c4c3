import numpy as np
import pytest

from wlkit.errors import PreconditionError
from wlkit.graph import Graph, complete_graph, cycle_graph, disjoint_union, petersen_graph, star_graph
from wlkit.oracles import CorpusFilter, graphs_on
from wlkit.schemes import (NotStableError, Verdict, brute_intersection_number, check_distance_multiset_lemma,
                           classify_constituent, configuration_from_coloring, configuration_of,
                           constituent_graph, row_sum_consistent, two_color_cycle_check, verify_coherence,
                           verify_scheme_axioms)
from wlkit.oracles import brute_isomorphic
from wlkit.wl import initial_coloring


class TestConfiguration:
    def test_c5(self):
        cfg = configuration_of(cycle_graph(5))
        assert cfg.d == 2
        edge = 1 + cfg.sizes()[1:].index(10) if cfg.relations[1][0, 1] else 2
        assert cfg.intersection_numbers[(edge, edge, edge)] == 0

    def test_petersen(self):
        cfg = configuration_of(petersen_graph())
        assert cfg.d == 2 and cfg.sizes() == [10, 30, 60]
        assert cfg.intersection_numbers[(1, 1, 1)] == 0
        assert cfg.intersection_numbers[(1, 1, 2)] == 1
        assert brute_intersection_number(cfg, 1, 1, 1) == 0
        assert brute_intersection_number(cfg, 1, 1, 2) == 1

    def test_k1(self):
        cfg = configuration_of(Graph(1))
        assert cfg.d == 0 and verify_scheme_axioms(cfg)

    def test_axioms(self):
        assert verify_scheme_axioms(configuration_of(petersen_graph()))
        assert verify_scheme_axioms(configuration_of(cycle_graph(5)))
        star = configuration_of(star_graph(3))
        assert not verify_scheme_axioms(star) and verify_coherence(star)

    def test_not_stable(self):
        g = star_graph(3)
        with pytest.raises(NotStableError):
            configuration_from_coloring(g, initial_coloring(g, 2))

    def test_matrix_route_matches_brute_force(self):
        for g in graphs_on(5, CorpusFilter.CONNECTED):
            cfg = configuration_of(g)
            d = len(cfg.relations)
            for i in range(d):
                for j in range(d):
                    for k in range(d):
                        assert brute_intersection_number(cfg, i, j, k) == cfg.intersection_numbers[(i, j, k)]

    def test_to_dict(self):
        d = configuration_of(petersen_graph()).to_dict()
        assert d["is_association_scheme"] and d["relation_sizes"] == [10, 30, 60]

    @pytest.mark.parametrize("n", range(1, 7))
    def test_coherent_on_corpus(self, n):
        for g in graphs_on(n):
            cfg = configuration_of(g)
            assert verify_coherence(cfg) and row_sum_consistent(cfg)


class TestConstituents:
    def test_petersen(self):
        cfg = configuration_of(petersen_graph())
        assert constituent_graph(cfg, 1) == petersen_graph()
        comp = constituent_graph(cfg, 2)
        assert comp == petersen_graph().complement() and set(comp.degrees()) == {6}

    def test_c5_pentagram(self):
        cfg = configuration_of(cycle_graph(5))
        other = constituent_graph(cfg, 2 if cfg.relations[1][0, 1] else 1)
        assert brute_isomorphic(other, cycle_graph(5))[0]

    def test_diagonal_rejected(self):
        with pytest.raises(PreconditionError) as exc:
            constituent_graph(configuration_of(cycle_graph(5)), 0)
        assert exc.value.code == "DIAGONAL_RELATION"

    def test_classify(self):
        assert classify_constituent(cycle_graph(7)) == classify_constituent(cycle_graph(7))
        c7 = classify_constituent(cycle_graph(7))
        assert c7.verdict is Verdict.CYCLE and c7.cycle_length == 7
        assert classify_constituent(petersen_graph()).verdict is Verdict.THREE_CONNECTED
        tri = disjoint_union(cycle_graph(3), cycle_graph(3))[0]
        assert classify_constituent(tri).verdict is Verdict.DISCONNECTED

    def test_classify_precondition(self):
        with pytest.raises(PreconditionError):
            classify_constituent(star_graph(3))


class TestDistanceLemma:
    def test_examples(self):
        assert check_distance_multiset_lemma(cycle_graph(6))
        assert check_distance_multiset_lemma(petersen_graph())
        assert check_distance_multiset_lemma(complete_graph(5))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_corpus(self, n):
        assert all(check_distance_multiset_lemma(g) for g in graphs_on(n, CorpusFilter.CONNECTED))


class TestTwoColorCycle:
    def test_cycles_pass(self):
        for n in range(4, 9):
            assert two_color_cycle_check(cycle_graph(n)) == (True, True)

    def test_not_applicable(self):
        assert two_color_cycle_check(complete_graph(4)) == (False, True)

    def test_theta_graph_witness(self):
        # paths of lengths 1, 3 and 3 between vertices 0 and 5: the hypothesis
        # holds via the separator {0, 1} but the graph is not a cycle
        g = Graph.from_edges(6, [(0, 3), (0, 4), (0, 5), (1, 3), (1, 5), (2, 4), (2, 5)])
        assert two_color_cycle_check(g) == (True, False)

    def test_requires_biconnected(self):
        with pytest.raises(PreconditionError):
            two_color_cycle_check(star_graph(3))
