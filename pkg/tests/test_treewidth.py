import networkx as nx
import pytest
from hypothesis import given, settings
from networkx.algorithms.approximation import treewidth_min_degree

from conftest import from_nx, to_nx
from test_graph import graphs
from wlkit.cfi import grid
from wlkit.errors import InvalidGraphError, ResourceGuardError
from wlkit.graph import Graph, complete_graph, cycle_graph, path_graph, petersen_graph, star_graph
from wlkit.treewidth import (TreeDecomposition, arnborg_check, decomposition_problems, exact_treewidth,
                             treewidth_by_recursion, trivial_decomposition, validate_decomposition)


def from_nx_decomposition(g: Graph, T: nx.Graph) -> TreeDecomposition:
    nodes = list(T.nodes())
    pos = {t: i for i, t in enumerate(nodes)}
    tree = Graph.from_edges(len(nodes), [(pos[a], pos[b]) for a, b in T.edges()])
    return TreeDecomposition(tree, tuple(frozenset(t) for t in nodes))


class TestValidate:
    def test_single_bag(self):
        g = petersen_graph()
        assert validate_decomposition(g, trivial_decomposition(g)) == (True, 9)

    def test_path_two_bags(self):
        td = TreeDecomposition(Graph.from_edges(2, [(0, 1)]), (frozenset({0, 1}), frozenset({1, 2})))
        assert validate_decomposition(path_graph(3), td) == (True, 1)

    def test_missing_vertex_and_edge(self):
        td = TreeDecomposition(Graph.from_edges(2, [(0, 1)]), (frozenset({0}), frozenset({2})))
        ok, _ = validate_decomposition(path_graph(3), td)
        problems = decomposition_problems(path_graph(3), td)
        assert not ok
        assert any("vertex 1" in p for p in problems) and any("edge" in p for p in problems)

    def test_disconnected_occurrence(self):
        tree = Graph.from_edges(3, [(0, 1), (1, 2)])
        td = TreeDecomposition(tree, (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})))
        assert not validate_decomposition(cycle_graph(3), td)[0]

    def test_not_a_tree(self):
        td = TreeDecomposition(cycle_graph(3), (frozenset({0, 1, 2}),) * 3)
        assert not validate_decomposition(complete_graph(3), td)[0]

    def test_json_round_trip(self):
        td = TreeDecomposition(Graph.from_edges(2, [(0, 1)]), (frozenset({0, 1}), frozenset({1, 2})), ("x", "y"))
        back = TreeDecomposition.from_json(td.to_json())
        assert back.bags == td.bags and back.tree == td.tree and back.labels == td.labels

    def test_json_named_nodes(self):
        d = {"nodes": ["p", "q"], "edges": [["p", "q"]], "bags": {"p": [0, 1], "q": [1, 2]}}
        assert validate_decomposition(path_graph(3), TreeDecomposition.from_dict(d)) == (True, 1)

    def test_json_malformed(self):
        with pytest.raises(InvalidGraphError):
            TreeDecomposition.from_json('{"nodes": [0]}')
        with pytest.raises(InvalidGraphError):
            TreeDecomposition.from_json("not json")


class TestExact:
    @pytest.mark.parametrize("g, tw", [
        (path_graph(2), 1), (path_graph(6), 1), (star_graph(5), 1),
        (cycle_graph(3), 2), (cycle_graph(9), 2),
        (complete_graph(6), 5), (Graph(3), 0), (Graph(1), 0),
        (petersen_graph(), 4),
    ])
    def test_known_values(self, g, tw):
        assert exact_treewidth(g) == tw

    def test_grid3_with_witness(self):
        g = grid(3)
        assert exact_treewidth(g) == 3
        # sliding window of four consecutive row-major vertices
        tree = Graph.from_edges(6, [(i, i + 1) for i in range(5)])
        td = TreeDecomposition(tree, tuple(frozenset(range(i, i + 4)) for i in range(6)))
        assert validate_decomposition(g, td) == (True, 3)

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            exact_treewidth(cycle_graph(15))
        with pytest.raises(ResourceGuardError):
            arnborg_check(cycle_graph(11), 2)

    def test_grid4(self):
        assert exact_treewidth(grid(3).complement()) == exact_treewidth(grid(3).complement())
        assert exact_treewidth(Graph.from_edges(12, [(i, j) for i in range(12) for j in range(i + 1, 12)
                                                      if (i // 4 == j // 4 and j == i + 1) or j == i + 4])) == 3

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=8))
    def test_dp_equals_recursion(self, g):
        assert exact_treewidth(g) == treewidth_by_recursion(g)

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=11))
    def test_below_any_valid_decomposition(self, g):
        if g.n == 0:
            return
        width, T = treewidth_min_degree(to_nx(g))
        td = from_nx_decomposition(g, T)
        ok, w = validate_decomposition(g, td)
        assert ok and w == width
        assert exact_treewidth(g) <= w

    def test_recursion_examples(self):
        assert arnborg_check(cycle_graph(6), 2) and not arnborg_check(cycle_graph(6), 1)
        assert arnborg_check(complete_graph(4), 3) and not arnborg_check(complete_graph(4), 2)
        assert treewidth_by_recursion(grid(3)) == 3
