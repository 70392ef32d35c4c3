import networkx as nx
import pytest

from wlkit.graph import Graph, cycle_graph, disjoint_union


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def from_nx(G: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(G.nodes()))}
    return Graph.from_edges(len(idx), [(idx[u], idx[v]) for u, v in G.edges()])


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def two_triangles():
    return disjoint_union(cycle_graph(3), cycle_graph(3))[0]


_ACCEPTANCE: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py::test_A" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1][len("test_"):]
    _ACCEPTANCE[name] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        status, secs = _ACCEPTANCE[name]
        crit, _, label = name.partition("_")
        terminalreporter.write_line(f"{crit} {status}  {label.replace('_', ' ')}  ({secs:.1f}s)")
