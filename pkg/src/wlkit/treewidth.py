"""Tree decompositions: the container, a validator and exact treewidth.

Two independent exact methods are provided. ``exact_treewidth`` runs the
classical subset dynamic program over elimination orders; ``arnborg_check``
evaluates the recursive separator characterization of Arnborg, Corneil and
Proskurowski directly. They share no code beyond the graph type, so tests
compare them against each other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import InvalidGraphError, ResourceGuardError
from .graph import Graph, connected_components, is_connected

TREEWIDTH_MAX_N = 14
ARNBORG_MAX_N = 10


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    """A tree on nodes ``0..N-1`` with one bag per node.

    ``labels`` optionally names nodes (for example ``"A(1,2)"``); it has no
    effect on validity.
    """

    tree: Graph
    bags: tuple[frozenset, ...]
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        bags = tuple(frozenset(int(x) for x in b) for b in self.bags)
        if len(bags) != self.tree.n:
            raise InvalidGraphError(f"{self.tree.n} tree nodes but {len(bags)} bags")
        object.__setattr__(self, "bags", bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_dict(self) -> dict:
        d = {
            "nodes": list(range(self.tree.n)),
            "edges": [list(e) for e in self.tree.sorted_edges()],
            "bags": {str(t): sorted(b) for t, b in enumerate(self.bags)},
        }
        if self.labels is not None:
            d["labels"] = {str(t): s for t, s in enumerate(self.labels)}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TreeDecomposition":
        """Accepts arbitrary hashable node ids; they are renumbered in the listed order."""
        try:
            nodes = list(d["nodes"])
            pos = {str(t): i for i, t in enumerate(nodes)}
            if len(pos) != len(nodes):
                raise InvalidGraphError("duplicate tree node ids")
            edges = [(pos[str(u)], pos[str(v)]) for u, v in d["edges"]]
            bags = [frozenset()] * len(nodes)
            for t, bag in d["bags"].items():
                bags[pos[str(t)]] = frozenset(int(x) for x in bag)
            labels = d.get("labels")
            if labels is not None:
                labels = tuple(str(labels.get(str(t), t)) for t in nodes)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGraphError(f"malformed decomposition: {exc!r}", code="MALFORMED_DECOMPOSITION") from exc
        return cls(Graph.from_edges(len(nodes), edges), tuple(bags), labels)

    @classmethod
    def from_json(cls, text: str) -> "TreeDecomposition":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidGraphError(f"not JSON: {exc}", code="MALFORMED_DECOMPOSITION") from exc


def decomposition_problems(g: Graph, td: TreeDecomposition) -> list[str]:
    """Every reason ``td`` fails to be a tree decomposition of ``g`` (empty when valid)."""
    problems = []
    t = td.tree
    if t.n == 0:
        if g.n:
            problems.append("decomposition has no nodes")
        return problems
    if t.m != t.n - 1 or not is_connected(t):
        problems.append("tree graph is not a tree")
    for node, bag in enumerate(td.bags):
        stray = sorted(x for x in bag if not 0 <= x < g.n)
        if stray:
            problems.append(f"bag {node} contains non-vertices {stray}")
    occurs: list[list[int]] = [[] for _ in range(g.n)]
    for node, bag in enumerate(td.bags):
        for x in bag:
            if 0 <= x < g.n:
                occurs[x].append(node)
    for v, nodes in enumerate(occurs):
        if not nodes:
            problems.append(f"vertex {v} is in no bag")
            continue
        keep = set(nodes)
        drop = [x for x in range(t.n) if x not in keep]
        if len(connected_components(t, drop)) != 1:
            problems.append(f"bags containing vertex {v} are not connected in the tree")
    for u, v in g.sorted_edges():
        if not any(u in b and v in b for b in td.bags):
            problems.append(f"edge {u}-{v} is in no bag")
    return problems


def validate_decomposition(g: Graph, td: TreeDecomposition) -> tuple[bool, int]:
    """``(valid, width)``; width is computed even for invalid input."""
    return not decomposition_problems(g, td), td.width


def trivial_decomposition(g: Graph) -> TreeDecomposition:
    return TreeDecomposition(Graph(1), (frozenset(range(g.n)),))


# ---------------------------------------------------------------------------
# exact treewidth by dynamic programming over vertex subsets


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.neighbors[v]) for v in range(g.n)]


def exact_treewidth(g: Graph) -> int:
    """Minimum width over all tree decompositions.

    ``TW(S)`` is the best achievable maximum "degree at elimination" when the
    vertices of ``S`` are eliminated first; eliminating ``v`` after ``S``
    costs ``|Q(S, v)|``, the vertices outside ``S + v`` reachable from ``v``
    through ``S``. Then ``tw(G) = TW(V)``.
    """
    n = g.n
    if n > TREEWIDTH_MAX_N:
        raise ResourceGuardError(f"exact treewidth limited to n <= {TREEWIDTH_MAX_N} (got {n})")
    if n == 0:
        return -1
    nbr = _masks(g)
    full = (1 << n) - 1

    def q_size(s: int, v: int) -> int:
        seen = 1 << v
        frontier = 1 << v
        reach = 0
        while frontier:
            x = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = nbr[x] & ~seen
            seen |= new
            reach |= new & ~s
            frontier |= new & s
        return bin(reach).count("1")

    tw = [0] * (1 << n)
    tw[0] = -1
    for s in range(1, full + 1):
        best = n
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            prev = s ^ low
            cost = max(tw[prev], q_size(prev, v))
            if cost < best:
                best = cost
        tw[s] = best
    return tw[full]


# ---------------------------------------------------------------------------
# the recursive separator characterization


def _components_within(g: Graph, verts: frozenset) -> list[frozenset]:
    drop = [x for x in range(g.n) if x not in verts]
    return [frozenset(c) for c in connected_components(g, drop)]


def arnborg_check(g: Graph, k: int) -> bool:
    """Does ``g`` have treewidth at most ``k``?

    Evaluates the characterization literally: ``G(S, C)`` (``G[S + C]`` with a
    clique on the ``k``-set ``S``) has treewidth at most ``k`` iff it is small
    or some ``v`` in ``C`` splits ``C - v`` into parts ``A``, each with a
    ``k``-subset ``S_A`` of ``S + v`` whose one excluded vertex has no
    neighbour in ``A`` and with ``G(S_A, A)`` again of treewidth at most ``k``.
    For the whole graph, ``tw <= k`` iff some ``k``-set ``S`` makes every
    component ``C`` of ``G - S`` pass.
    """
    if g.n > ARNBORG_MAX_N:
        raise ResourceGuardError(f"recursive treewidth check limited to n <= {ARNBORG_MAX_N} (got {g.n})")
    if k < 0:
        return g.n == 0
    if g.n <= k + 1:
        return True
    nbrs = g.neighbors

    @lru_cache(maxsize=None)
    def rec(s: frozenset, c: frozenset) -> bool:
        if len(s) + len(c) <= k + 1:
            return True
        for v in sorted(c):
            pool = s | {v}
            if all(any(not (nbrs[out] & a) and rec(pool - {out}, a) for out in sorted(pool))
                   for a in _components_within(g, c - {v})):
                return True
        return False

    for s in combinations(range(g.n), k):
        fs = frozenset(s)
        if all(rec(fs, c) for c in _components_within(g, frozenset(range(g.n)) - fs)):
            return True
    return False


def treewidth_by_recursion(g: Graph) -> int:
    """Smallest ``k`` accepted by :func:`arnborg_check`."""
    if g.n == 0:
        return -1
    k = 0
    while not arnborg_check(g, k):
        k += 1
    return k
