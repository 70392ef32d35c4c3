"""Brute-force references the main modules are tested against.

Nothing here imports the WL engine: the isomorphism search, the naive
2-WL and the corpus generator are deliberately self-contained.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .errors import ResourceGuardError
from .graph import Graph, connected_components, emit_graph6, read_graph6_file

log = logging.getLogger(__name__)

ISO_MAX_N = 20
ISO_MAX_N_COLORED = 64
ISO_MAX_COLOR_CLASS = 8
NAIVE_WL_MAX_N = 12
BUILTIN_MAX_N = 7


# ---------------------------------------------------------------------------
# isomorphism


def _check_iso_guard(g: Graph, h: Graph) -> None:
    n = max(g.n, h.n)
    if n <= ISO_MAX_N:
        return
    if g.vertex_color is not None and h.vertex_color is not None and n <= ISO_MAX_N_COLORED:
        largest = max(_class_sizes(g.vertex_color) + _class_sizes(h.vertex_color))
        if largest <= ISO_MAX_COLOR_CLASS:
            return
    raise ResourceGuardError(
        f"isomorphism oracle limited to n <= {ISO_MAX_N}, or vertex-colored n <= {ISO_MAX_N_COLORED} "
        f"with color classes of size <= {ISO_MAX_COLOR_CLASS} (got n={n})")


def _class_sizes(colors) -> list[int]:
    sizes: dict[int, int] = {}
    for c in colors:
        sizes[c] = sizes.get(c, 0) + 1
    return list(sizes.values())


def _arc(g: Graph, u: int, v: int):
    return None if g.arc_color is None else g.arc_color.get((u, v))


def is_isomorphism(g: Graph, h: Graph, perm) -> bool:
    """Direct recheck of a candidate map g-vertex -> h-vertex."""
    if g.n != h.n or sorted(perm) != list(range(h.n)):
        return False
    if any(g.color(v) != h.color(perm[v]) for v in range(g.n)):
        return False
    if len(g.edges) != len(h.edges):
        return False
    if any(not h.has_edge(perm[u], perm[v]) for u, v in g.edges):
        return False
    if (g.arc_color is None) != (h.arc_color is None):
        return False
    if g.arc_color is not None:
        return all(h.arc_color[(perm[u], perm[v])] == c for (u, v), c in g.arc_color.items())
    return True


def _refine_pair(g: Graph, h: Graph, cg: list, ch: list):
    """Joint color refinement; None if the color histograms diverge."""
    while True:
        sg = [(cg[v], tuple(sorted((_arc(g, v, w), cg[w]) for w in g.neighbors[v]))) for v in range(g.n)]
        sh = [(ch[v], tuple(sorted((_arc(h, v, w), ch[w]) for w in h.neighbors[v]))) for v in range(h.n)]
        ids = {s: i for i, s in enumerate(sorted(set(sg) | set(sh), key=repr))}
        ng = [ids[s] for s in sg]
        nh = [ids[s] for s in sh]
        if sorted(ng) != sorted(nh):
            return None
        if len(set(ng)) == len(set(cg)):
            return ng, nh
        cg, ch = ng, nh


def _search(g: Graph, h: Graph, cg: list, ch: list):
    refined = _refine_pair(g, h, cg, ch)
    if refined is None:
        return None
    cg, ch = refined
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(cg):
        cells.setdefault(c, []).append(v)
    open_cells = [(len(vs), c) for c, vs in cells.items() if len(vs) > 1]
    if not open_cells:
        where = {c: w for w, c in enumerate(ch)}
        perm = [where[c] for c in cg]
        return perm if is_isomorphism(g, h, perm) else None
    color = min(open_cells)[1]
    v = cells[color][0]
    fresh = max(max(cg), max(ch)) + 1
    for w in (x for x in range(h.n) if ch[x] == color):
        cg2, ch2 = list(cg), list(ch)
        cg2[v] = fresh
        ch2[w] = fresh
        found = _search(g, h, cg2, ch2)
        if found is not None:
            return found
    return None


def _plain_backtrack(g: Graph, h: Graph):
    n = g.n
    perm = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or g.color(v) != h.color(w) or _arc(g, v, v) != _arc(h, w, w):
                continue
            if any(g.has_edge(u, v) != h.has_edge(perm[u], w) or _arc(g, u, v) != _arc(h, perm[u], w)
                   or _arc(g, v, u) != _arc(h, w, perm[u]) for u in range(v)):
                continue
            perm[v], used[w] = w, True
            if extend(v + 1):
                return True
            perm[v], used[w] = -1, False
        return False

    return list(perm) if extend(0) else None


def brute_isomorphic(g: Graph, h: Graph, *, prune: bool = True) -> tuple[bool, list[int] | None]:
    """Exact colored isomorphism test; returns ``(verdict, witness)``.

    ``prune=True`` runs individualization/refinement; ``prune=False`` is a
    plain vertex-by-vertex backtracking search kept for auditing the pruning.
    Any witness is rechecked edge by edge before it is returned.
    """
    _check_iso_guard(g, h)
    if g.n != h.n or g.m != h.m:
        return False, None
    if (g.arc_color is None) != (h.arc_color is None):
        return False, None
    if prune:
        perm = _search(g, h, [g.color(v) for v in range(g.n)], [h.color(v) for v in range(h.n)])
    else:
        perm = _plain_backtrack(g, h)
    if perm is None:
        return False, None
    if not is_isomorphism(g, h, perm):
        raise AssertionError("isomorphism search produced an invalid witness")
    return True, perm


# ---------------------------------------------------------------------------
# naive 2-WL


def naive_wl2(g: Graph) -> list[list[tuple[int, int]]]:
    """Stable 2-WL pair partition by repeated full-signature comparison.

    Classes are sorted lists of ordered pairs, ordered by least member.
    """
    if g.n > NAIVE_WL_MAX_N:
        raise ResourceGuardError(f"naive_wl2 is limited to n <= {NAIVE_WL_MAX_N}")
    V = range(g.n)
    color = {}
    for u in V:
        for v in V:
            arc = _arc(g, u, v) if (u == v or g.has_edge(u, v)) else None
            color[(u, v)] = (u == v, g.has_edge(u, v), g.color(u), g.color(v), arc)
    classes = len(set(color.values()))
    while True:
        new = {}
        for u in V:
            for v in V:
                multiset = sorted((repr(color[(w, v)]), repr(color[(u, w)])) for w in V)
                new[(u, v)] = (repr(color[(u, v)]), tuple(multiset))
        # relabel by first occurrence to keep signatures short
        labels: dict = {}
        color = {p: labels.setdefault(s, len(labels)) for p, s in new.items()}
        if len(labels) == classes:
            break
        classes = len(labels)
    groups: dict[int, list] = {}
    for p in sorted(color):
        groups.setdefault(color[p], []).append(p)
    return sorted(groups.values(), key=lambda c: c[0])


# ---------------------------------------------------------------------------
# corpus


class CorpusFilter(enum.Enum):
    ALL = "all"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"


@dataclass(frozen=True)
class CorpusSpec:
    """``source`` is ``None`` for the built-in enumeration, else a graph6 path.

    ``exact_n`` restricts the built-in enumeration to one order instead of
    everything up to ``max_n``.
    """

    max_n: int
    filter: CorpusFilter = CorpusFilter.ALL
    source: str | None = None
    min_n: int = 1

    def __post_init__(self):
        if self.source is None and self.max_n > BUILTIN_MAX_N:
            raise ResourceGuardError(
                f"built-in enumeration is limited to max_n <= {BUILTIN_MAX_N}; pass a graph6 file for larger sweeps")

    def describe(self) -> str:
        src = "builtin" if self.source is None else self.source
        return f"{src}:n={self.min_n}..{self.max_n}:{self.filter.value}"


def _invariant(g: Graph) -> tuple:
    nbrs = g.neighbors
    tri = [sum(1 for a, b in combinations(sorted(nbrs[v]), 2) if b in nbrs[a]) for v in range(g.n)]
    return tuple(sorted((len(nbrs[v]), tri[v], tuple(sorted(len(nbrs[w]) for w in nbrs[v]))) for v in range(g.n)))


def extend_by_vertex(graphs: list[Graph]) -> list[Graph]:
    """All graphs on n+1 vertices up to isomorphism, from all graphs on n.

    Every (n+1)-vertex graph arises from an n-vertex one by adding a vertex,
    so taking every neighbourhood subset and deduplicating is complete.
    """
    buckets: dict[tuple, list[Graph]] = {}
    out: list[Graph] = []
    for g in graphs:
        n = g.n
        for mask in range(1 << n):
            new_edges = [(v, n) for v in range(n) if mask >> v & 1]
            cand = Graph(n + 1, g.edges | frozenset(new_edges))
            key = _invariant(cand)
            reps = buckets.setdefault(key, [])
            if any(brute_isomorphic(cand, r)[0] for r in reps):
                continue
            reps.append(cand)
            out.append(cand)
    return out


@lru_cache(maxsize=None)
def _all_graphs(n: int) -> tuple[Graph, ...]:
    if n <= 1:
        return (Graph(max(n, 0)),)
    graphs = extend_by_vertex(list(_all_graphs(n - 1)))
    graphs.sort(key=lambda g: (g.m, emit_graph6(g)))
    log.info("enumerated %d graphs on %d vertices", len(graphs), n)
    return tuple(graphs)


def _is_biconnected(g: Graph) -> bool:
    if g.n < 3 or len(connected_components(g)) != 1:
        return False
    return all(len(connected_components(g, [v])) == 1 for v in range(g.n))


def _keep(g: Graph, flt: CorpusFilter) -> bool:
    if flt is CorpusFilter.CONNECTED:
        return len(connected_components(g)) == 1
    if flt is CorpusFilter.BICONNECTED:
        return _is_biconnected(g)
    return True


def enumerate_corpus(spec: CorpusSpec) -> Iterator[Graph]:
    """Stream the corpus graphs in a deterministic order."""
    if spec.source is None:
        for n in range(spec.min_n, spec.max_n + 1):
            count = 0
            for g in _all_graphs(n):
                if _keep(g, spec.filter):
                    count += 1
                    yield g
            log.info("corpus n=%d filter=%s: %d graphs", n, spec.filter.value, count)
    else:
        for g in read_graph6_file(spec.source):
            if spec.min_n <= g.n <= spec.max_n and _keep(g, spec.filter):
                yield g


def graphs_on(n: int, flt: CorpusFilter = CorpusFilter.ALL) -> list[Graph]:
    """Built-in isomorphism classes on exactly ``n`` vertices."""
    return list(enumerate_corpus(CorpusSpec(n, flt, min_n=n)))
