"""Separators, component sizes and the color-avoiding graph G[[S]].

Everything is brute force with explicit component recounts; at desk scale
this is fast enough and leaves little room for subtle bugs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import InvalidGraphError, PreconditionError, ResourceGuardError
from .graph import Graph, bfs_distances, connected_components, is_connected
from .wl import TupleColoring, diagonal_colors, joint_stable_coloring, stable_coloring

SEPARATOR_MAX_N = 64
SOUNDNESS_MAX_N = 12
SOUNDNESS3_MAX_N = 8


@dataclass(frozen=True)
class SeparatorReport:
    k: int
    separators: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.separators)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.separators


def num_components(g: Graph, removed=()) -> int:
    return len(connected_components(g, removed))


def is_separator(g: Graph, s, base: int | None = None) -> bool:
    if base is None:
        base = num_components(g)
    return num_components(g, s) > base


def cut_vertices(g: Graph) -> set[int]:
    """Cut vertices by recounting components after each single removal."""
    base = num_components(g)
    return {v for v in range(g.n) if num_components(g, [v]) > base}


def cut_vertices_lowlink(g: Graph) -> set[int]:
    """Cut vertices via iterative DFS low-link; cross-checks :func:`cut_vertices`."""
    disc = [-1] * g.n
    low = [0] * g.n
    cuts = set()
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(sorted(g.neighbors[root])))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(sorted(g.neighbors[w]))))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if parent == root:
                    root_children += 1
                elif low[v] >= disc[parent]:
                    cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts


def enumerate_separators(g: Graph, k: int) -> SeparatorReport:
    if k < 1:
        raise PreconditionError("separator size must be >= 1")
    if g.n > SEPARATOR_MAX_N or (k > 3 and g.n > 16):
        raise ResourceGuardError(f"separator enumeration limited to n <= {SEPARATOR_MAX_N} (k <= 3)")
    base = num_components(g)
    seps = tuple(s for s in combinations(range(g.n), k) if num_components(g, s) > base)
    return SeparatorReport(k, seps)


def is_k_connected(g: Graph, k: int) -> bool:
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if not is_connected(g) or g.n == 0:
        return False
    # a set is a separator only if it leaves MORE components; removing everything leaves 0
    return all(num_components(g, s) <= 1 for size in range(1, k) for s in combinations(range(g.n), size))


def is_cycle(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and all(len(a) == 2 for a in g.neighbors)


def component_size_after_removal(g: Graph, removed, anchor: int) -> int:
    """|component of ``anchor`` in ``g - removed``|, or 0 if the anchor was removed."""
    removed = tuple(removed)
    for v in (*removed, anchor):
        if not 0 <= v < g.n:
            raise InvalidGraphError(f"vertex {v} out of range", code="VERTEX_OUT_OF_RANGE")
    if anchor in removed:
        return 0
    return len(bfs_distances(g, anchor, frozenset(removed)))


def component_sizes_table(g: Graph, removed) -> list[int]:
    """Per vertex, the size of its component in ``g - removed`` (0 for removed vertices)."""
    sizes = [0] * g.n
    for comp in connected_components(g, removed):
        for v in comp:
            sizes[v] = len(comp)
    return sizes


def avoid_graph(g: Graph, c: TupleColoring, s) -> tuple[Graph, dict[int, int]]:
    """G[[S]]: vertices whose diagonal color is in ``s``; ``uv`` is an edge
    iff some path from u to v has all interior vertices outside ``s``.

    Returns the graph and the map old vertex id -> new vertex id.
    """
    if c.k != 2 or c.n != g.n:
        raise PreconditionError("avoid_graph needs a 2-WL coloring of g")
    diag = diagonal_colors(c)
    s = set(s)
    if not s <= set(diag):
        raise PreconditionError(f"colors {sorted(s - set(diag))} are not diagonal colors", code="COLOR_NOT_DIAGONAL")
    keep = [v for v in range(g.n) if diag[v] in s]
    index = {v: i for i, v in enumerate(keep)}
    edges = set()
    for u in keep:
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in g.neighbors[x]:
                if y in seen:
                    continue
                seen.add(y)
                if y in index:
                    edges.add((min(index[u], index[y]), max(index[u], index[y])))
                else:
                    stack.append(y)
    return Graph(len(keep), frozenset(edges)), index


# ---------------------------------------------------------------------------
# color soundness checks


def _tuple_is_separator(g: Graph, tup, base: int) -> bool:
    return len(set(tup)) == len(tup) and num_components(g, tup) > base


def find_separator_color_violation(g: Graph, k: int = 2, coloring: TupleColoring | None = None) -> dict | None:
    """A stable color class holding both a k-separator tuple and a non-separator tuple.

    Returns None when every class is pure.
    """
    guard = SOUNDNESS_MAX_N if k == 2 else SOUNDNESS3_MAX_N
    if g.n > guard or k not in (2, 3):
        raise ResourceGuardError(f"separator soundness check limited to k in (2, 3) and n <= {guard} for k={k}")
    if not is_connected(g):
        raise PreconditionError("separator soundness is stated for connected graphs")
    c = coloring if coloring is not None else stable_coloring(g, k)
    base = num_components(g)
    verdict: dict[int, tuple[bool, tuple]] = {}
    for tup in product(range(g.n), repeat=k):
        col = c.color(tup)
        sep = _tuple_is_separator(g, tup, base)
        if col not in verdict:
            verdict[col] = (sep, tup)
        elif verdict[col][0] != sep:
            first = verdict[col][1]
            sep_t, non_t = (tup, first) if sep else (first, tup)
            return {"color": col, "separator_tuple": list(sep_t), "non_separator_tuple": list(non_t)}
    return None


def separator_color_soundness(g: Graph, k: int = 2) -> bool:
    return find_separator_color_violation(g, k) is None


def find_cross_separator_violation(g: Graph, h: Graph) -> dict | None:
    """Same check across two graphs through a joint stable 2-WL coloring."""
    if not (is_connected(g) and is_connected(h)):
        raise PreconditionError("cross-graph separator check needs connected graphs")
    cg, ch = joint_stable_coloring(g, h, 2)
    verdict: dict[int, tuple[bool, str, tuple]] = {}
    for name, gr, c in (("G", g, cg), ("H", h, ch)):
        base = num_components(gr)
        for tup in product(range(gr.n), repeat=2):
            col = c.color(tup)
            sep = _tuple_is_separator(gr, tup, base)
            if col not in verdict:
                verdict[col] = (sep, name, tup)
            elif verdict[col][0] != sep:
                return {"color": col, "first": [verdict[col][1], list(verdict[col][2]), verdict[col][0]],
                        "second": [name, list(tup), sep]}
    return None


def _s_values(g: Graph) -> np.ndarray:
    """s[v1, v2, v3] for all triples."""
    n = g.n
    s = np.zeros((n, n, n), dtype=np.int64)
    for v1 in range(n):
        for v2 in range(n):
            s[v1, v2] = component_sizes_table(g, {v1, v2})
    return s


def _triple_keys(P: np.ndarray):
    n = P.shape[0]
    for t in product(range(n), repeat=3):
        yield t, tuple(int(P[a, b]) for a in t for b in t)


def find_component_size_violation(g: Graph, require_biconnected: bool = True) -> dict | None:
    """Triples with all nine pair colors equal but different s-values."""
    if g.n > SOUNDNESS_MAX_N:
        raise ResourceGuardError(f"component-size check limited to n <= {SOUNDNESS_MAX_N}")
    if require_biconnected and not is_k_connected(g, 2):
        raise PreconditionError("component-size soundness is stated for 2-connected graphs")
    P = stable_coloring(g, 2).pair_matrix()
    s = _s_values(g)
    seen: dict[tuple, tuple[int, tuple]] = {}
    for t, key in _triple_keys(P):
        val = int(s[t])
        if key not in seen:
            seen[key] = (val, t)
        elif seen[key][0] != val:
            return {"colors": list(key), "triple_a": list(seen[key][1]), "s_a": seen[key][0],
                    "triple_b": list(t), "s_b": val}
    return None


def component_size_color_soundness(g: Graph, require_biconnected: bool = True) -> bool:
    return find_component_size_violation(g, require_biconnected) is None


def find_cross_component_size_violation(g: Graph, h: Graph) -> dict | None:
    cg, ch = joint_stable_coloring(g, h, 2)
    seen: dict[tuple, tuple[int, str, tuple]] = {}
    for name, gr, c in (("G", g, cg), ("H", h, ch)):
        s = _s_values(gr)
        for t, key in _triple_keys(c.pair_matrix()):
            val = int(s[t])
            if key not in seen:
                seen[key] = (val, name, t)
            elif seen[key][0] != val:
                first = seen[key]
                return {"colors": list(key), "first": [first[1], list(first[2]), first[0]],
                        "second": [name, list(t), val]}
    return None
