"""Immutable simple graphs, text formats, and elementary graph computations.

Vertices are the dense ids ``0..n-1``. Operations that re-index vertices
(``remove_vertices``, ``disjoint_union``) return the re-indexing map
explicitly instead of hiding it.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import GraphFormatError, InvalidGraphError

Edge = tuple[int, int]


class _Infinite:
    """Distance between vertices in different components."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())

    # orders after every integer so multisets sort naturally
    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, _Infinite)

    def __le__(self, other):
        return isinstance(other, _Infinite)

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _check_segment(colors: Iterable[int], what: str) -> None:
    used = set(colors)
    if used and used != set(range(len(used))):
        raise InvalidGraphError(f"{what} ids must form an initial segment 0..c-1, got {sorted(used)}")


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph with optional vertex and arc colors.

    ``arc_color``, when given, must be defined exactly on the loops ``(v, v)``
    and on both orientations of every edge.
    """

    n: int
    edges: frozenset = frozenset()
    vertex_color: tuple | None = None
    arc_color: Mapping | None = field(default=None, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraphError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InvalidGraphError(f"loop at vertex {u}", code="SELF_LOOP")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraphError(f"edge {e} has an endpoint outside 0..{self.n - 1}",
                                        code="VERTEX_OUT_OF_RANGE")
            norm.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.vertex_color is not None:
            vc = tuple(int(c) for c in self.vertex_color)
            if len(vc) != self.n:
                raise InvalidGraphError("vertex_color must have one entry per vertex")
            _check_segment(vc, "vertex color")
            object.__setattr__(self, "vertex_color", vc)
        if self.arc_color is not None:
            ac = {(int(u), int(v)): int(c) for (u, v), c in self.arc_color.items()}
            domain = {(v, v) for v in range(self.n)}
            for u, v in norm:
                domain.add((u, v))
                domain.add((v, u))
            if set(ac) != domain:
                raise InvalidGraphError("arc_color domain must be all loops plus both orientations of every edge")
            _check_segment(ac.values(), "arc color")
            object.__setattr__(self, "arc_color", MappingProxyType(ac))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], vertex_color=None, arc_color=None) -> "Graph":
        return cls(n, frozenset(_norm_edge(int(u), int(v)) for u, v in edges), vertex_color, arc_color)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        a.setflags(write=False)
        return a

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def color(self, v: int) -> int:
        return 0 if self.vertex_color is None else self.vertex_color[v]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @property
    def is_colored(self) -> bool:
        return self.vertex_color is not None or self.arc_color is not None

    def uncolored(self) -> "Graph":
        return Graph(self.n, self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidGraphError("relabel needs a permutation of 0..n-1")
        edges = frozenset(_norm_edge(perm[u], perm[v]) for u, v in self.edges)
        vc = None
        if self.vertex_color is not None:
            inv = [0] * self.n
            for v, p in enumerate(perm):
                inv[p] = self.vertex_color[v]
            vc = tuple(inv)
        ac = None
        if self.arc_color is not None:
            ac = {(perm[u], perm[v]): c for (u, v), c in self.arc_color.items()}
        return Graph(self.n, edges, vc, ac)

    def complement(self) -> "Graph":
        edges = frozenset(e for e in combinations(range(self.n), 2) if e not in self.edges)
        return Graph(self.n, edges, self.vertex_color)

    def __repr__(self) -> str:
        extra = ", colored" if self.is_colored else ""
        return f"Graph(n={self.n}, m={self.m}{extra})"


# ---------------------------------------------------------------------------
# small named graphs used throughout tests and the CLI


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidGraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at vertex 0."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``.

    Lines ``"c v color"`` assign vertex colors; uncolored vertices then get 0.
    Blank lines and lines starting with ``#`` are ignored. Duplicate edges
    are merged.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty input")
    lineno, header = lines[0]
    parts = header.split()
    try:
        n, m = (int(p) for p in parts)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected 'n m', got {header!r}") from None
    if n < 0 or m < 0:
        raise GraphFormatError(f"line {lineno}: negative count")

    edges = set()
    colors: dict[int, int] = {}
    n_edge_lines = 0
    for lineno, ln in lines[1:]:
        parts = ln.split()
        is_color = parts[0] == "c"
        if is_color:
            parts = parts[1:]
        try:
            a, b = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: cannot parse {ln!r}") from None
        if is_color:
            if not 0 <= a < n:
                raise GraphFormatError(f"line {lineno}: vertex {a} out of range", code="VERTEX_OUT_OF_RANGE")
            if b < 0:
                raise GraphFormatError(f"line {lineno}: negative color")
            colors[a] = b
            continue
        n_edge_lines += 1
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(f"line {lineno}: edge ({a}, {b}) out of range for n={n}",
                                   code="VERTEX_OUT_OF_RANGE")
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop at {a}", code="SELF_LOOP")
        edges.add(_norm_edge(a, b))
    if n_edge_lines != m:
        raise GraphFormatError(f"header announces {m} edges but {n_edge_lines} edge lines follow")

    vc = None
    if colors:
        raw = [colors.get(v, 0) for v in range(n)]
        # compress to an initial segment, keeping the relative order of the given ids
        rank = {c: i for i, c in enumerate(sorted(set(raw)))}
        vc = tuple(rank[c] for c in raw)
    return Graph(n, frozenset(edges), vc)


def emit_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    if g.vertex_color is not None:
        lines += [f"c {v} {c}" for v, c in enumerate(g.vertex_color)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# graph6

GRAPH6_MAX_N = 258047


def _g6_error(msg: str) -> GraphFormatError:
    return GraphFormatError(msg, code="INVALID_GRAPH6")


def parse_graph6(line: str) -> Graph:
    """Decode one graph6 string (optional ``>>graph6<<`` header).

    Supports the 1-byte size prefix (n <= 62) and the 4-byte ``~`` prefix
    (n <= 258047). The 8-byte ``~~`` prefix is rejected.
    """
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise _g6_error("empty string")
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise _g6_error(f"character outside the printable graph6 range in {s!r}")
    data = [ord(ch) - 63 for ch in s]
    if data[0] == 63:
        if len(data) >= 2 and data[1] == 63:
            raise _g6_error("8-byte size prefix (n > 258047) is not supported")
        if len(data) < 4:
            raise _g6_error("truncated size prefix")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        if n <= 62:
            raise _g6_error("long size prefix used for n <= 62")
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    nbits = n * (n - 1) // 2
    if len(body) != math.ceil(nbits / 6):
        raise _g6_error(f"expected {math.ceil(nbits / 6)} data bytes for n={n}, got {len(body)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    pad = len(body) * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise _g6_error("nonzero padding bits")
    return Graph.from_edges(n, edges)


def emit_graph6(g: Graph) -> str:
    """Encode the (uncolored) graph in graph6; colors are not representable."""
    n = g.n
    if n > GRAPH6_MAX_N:
        raise _g6_error(f"n={n} exceeds the supported maximum {GRAPH6_MAX_N}")
    if n <= 62:
        out = [n]
    else:
        out = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    bits = [(i, j) in g.edges for j in range(1, n) for i in range(j)]
    bits += [False] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(val)
    return "".join(chr(x + 63) for x in out)


def read_graph6_file(path) -> Iterator[Graph]:
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield parse_graph6(line)


# ---------------------------------------------------------------------------
# distances and connectivity


def bfs_distances(g: Graph, source: int, removed: frozenset | set = frozenset()) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist and w not in removed:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


class DistanceMatrix:
    """All-pairs BFS distances; ``INFINITE`` between components."""

    def __init__(self, g: Graph):
        self.n = g.n
        self._rows = [bfs_distances(g, v) for v in range(g.n)]

    def __call__(self, u: int, v: int):
        return self._rows[u].get(v, INFINITE)

    __getitem__ = lambda self, uv: self(*uv)  # noqa: E731

    def row(self, u: int) -> list:
        r = self._rows[u]
        return [r.get(v, INFINITE) for v in range(self.n)]

    def as_array(self, infinite: int = -1) -> np.ndarray:
        a = np.full((self.n, self.n), infinite, dtype=np.int64)
        for u, r in enumerate(self._rows):
            for v, d in r.items():
                a[u, v] = d
        return a


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    return DistanceMatrix(g)


@dataclass(frozen=True)
class DistanceMultiset:
    vertex: int
    counts: Counter

    def __eq__(self, other):
        # equality of multisets, regardless of the base vertex
        return isinstance(other, DistanceMultiset) and self.counts == other.counts

    def __hash__(self):
        return hash(frozenset(self.counts.items()))

    def sorted(self) -> list:
        return sorted(self.counts.elements())


def distance_multiset(g: Graph, v: int, dist: DistanceMatrix | None = None) -> DistanceMultiset:
    if not 0 <= v < g.n:
        raise InvalidGraphError(f"vertex {v} out of range", code="VERTEX_OUT_OF_RANGE")
    row = dist.row(v) if dist is not None else [bfs_distances(g, v).get(w, INFINITE) for w in range(g.n)]
    return DistanceMultiset(v, Counter(row))


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Components of ``g - removed`` as sorted vertex lists, ordered by least vertex."""
    removed = frozenset(removed)
    seen = set(removed)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = list(bfs_distances(g, s, removed))
        seen.update(comp)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n == 0 or len(bfs_distances(g, 0)) == g.n


def remove_vertices(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the complement of ``s``.

    Returns the subgraph and the map old id -> new id for kept vertices.
    """
    s = set(s)
    for v in s:
        if not 0 <= v < g.n:
            raise InvalidGraphError(f"vertex {v} out of range", code="VERTEX_OUT_OF_RANGE")
    keep = [v for v in range(g.n) if v not in s]
    index = {v: i for i, v in enumerate(keep)}
    return induced_subgraph(g, keep, index), index


def induced_subgraph(g: Graph, keep: Sequence[int], index: dict[int, int] | None = None) -> Graph:
    if index is None:
        index = {v: i for i, v in enumerate(keep)}
    edges = frozenset(_norm_edge(index[u], index[v]) for u, v in g.edges if u in index and v in index)
    vc = None
    if g.vertex_color is not None:
        raw = [g.vertex_color[v] for v in keep]
        rank = {c: i for i, c in enumerate(sorted(set(raw)))}
        vc = tuple(rank[c] for c in raw)
    ac = None
    if g.arc_color is not None:
        raw_arcs = {(index[u], index[v]): c for (u, v), c in g.arc_color.items() if u in index and v in index}
        rank = {c: i for i, c in enumerate(sorted(set(raw_arcs.values())))}
        ac = {k: rank[c] for k, c in raw_arcs.items()}
    return Graph(len(keep), edges, vc, ac)


def disjoint_union(g: Graph, h: Graph) -> tuple[Graph, dict[int, int]]:
    """Place ``h`` after ``g``; returns the union and the map h-id -> union id.

    Vertex colors are kept only when both graphs carry them (or one side is
    empty); otherwise the union is uncolored. Arc colors are dropped.
    """
    shift = {v: v + g.n for v in range(h.n)}
    edges = set(g.edges) | {(u + g.n, v + g.n) for u, v in h.edges}
    vc = None
    if g.vertex_color is not None and (h.vertex_color is not None or h.n == 0):
        vc = g.vertex_color + (h.vertex_color or ())
    elif h.vertex_color is not None and g.n == 0:
        vc = h.vertex_color
    if vc is not None:
        rank = {c: i for i, c in enumerate(sorted(set(vc)))}
        vc = tuple(rank[c] for c in vc)
    return Graph(g.n + h.n, frozenset(edges), vc), shift
