"""Cai-Fürer-Immerman graphs, grids, and the explicit grid decompositions.

Provenance labels are plain tuples so they survive JSON round trips:

* ``("a", v, w)`` and ``("b", v, w)`` for the outer vertices attached to the
  directed base edge ``(v, w)``;
* ``("m", v, A)`` for the middle vertex of the gadget at ``v`` indexed by the
  even set ``A`` of neighbours, given as a sorted tuple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError
from .graph import Graph, emit_graph6, is_connected
from .treewidth import TreeDecomposition


def even_subsets(items) -> list[tuple]:
    """Even-sized subsets of ``items`` as sorted tuples, in lexicographic order."""
    items = sorted(items)
    subs = [c for r in range(0, len(items) + 1, 2) for c in combinations(items, r)]
    return sorted(subs)


@dataclass(frozen=True)
class Gadget:
    """The CFI gadget on a label set, with per-vertex provenance."""

    graph: Graph
    labels: tuple

    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}


def cfi_gadget(labels) -> Gadget:
    """Vertices ``a(w), b(w)`` per label ``w`` (sorted), then ``m_A`` for even ``A``.

    Each ``{a(w), b(w)}`` pair gets its own color (in label order) and all
    middle vertices share the next color.
    """
    s = sorted(set(labels))
    if not s:
        raise PreconditionError("gadget needs at least one label", code="EMPTY_LABEL_SET")
    names = []
    colors = []
    for i, w in enumerate(s):
        names += [("a", w), ("b", w)]
        colors += [i, i]
    subsets = even_subsets(s)
    names += [("m", a) for a in subsets]
    colors += [len(s)] * len(subsets)
    pos = {x: i for i, x in enumerate(names)}
    edges = []
    for a in subsets:
        m = pos[("m", a)]
        for w in s:
            edges.append((pos[("a" if w in a else "b", w)], m))
    return Gadget(Graph.from_edges(len(names), edges, vertex_color=colors), tuple(names))


@dataclass(frozen=True, eq=False)
class CFIInstance:
    graph: Graph
    base: Graph
    twist: frozenset
    provenance: tuple

    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.provenance)}

    def provenance_strings(self) -> list[str]:
        return [label_string(p) for p in self.provenance]

    def provenance_json(self) -> str:
        data = {
            "base_n": self.base.n,
            "base_edges": [list(e) for e in self.base.sorted_edges()],
            "twist": sorted(list(e) for e in self.twist),
            "vertices": {str(i): s for i, s in enumerate(self.provenance_strings())},
        }
        return json.dumps(data, indent=1, sort_keys=True)

    def graph6(self) -> str:
        return emit_graph6(self.graph)


def label_string(p: tuple) -> str:
    if p[0] == "m":
        return f"m({p[1]},{{{','.join(map(str, p[2]))}}})"
    return f"{p[0]}({p[1]},{p[2]})"


def _norm(e) -> tuple[int, int]:
    u, v = e
    return (u, v) if u < v else (v, u)


def cfi_graph(base: Graph, twist=()) -> CFIInstance:
    """``CFI_T(base)``: one gadget per base vertex, cross edges swapped on ``T``."""
    if base.n == 0 or not is_connected(base):
        raise PreconditionError("CFI base graph must be connected", code="NOT_CONNECTED")
    if min(base.degrees()) < 2:
        raise PreconditionError("CFI base graph needs minimum degree 2", code="MIN_DEGREE")
    t = frozenset(_norm(e) for e in twist)
    bad = sorted(e for e in t if e not in base.edges)
    if bad:
        raise PreconditionError(f"twist edges {bad} are not base edges", code="TWIST_NOT_EDGE")

    names: list[tuple] = []
    colors: list[int] = []
    edges: list[tuple[int, int]] = []
    next_color = 0
    for v in range(base.n):
        gad = cfi_gadget(sorted(base.neighbors[v]))
        offset = len(names)
        for lab, col in zip(gad.labels, gad.graph.vertex_color):
            names.append((lab[0], v, lab[1]))
            colors.append(next_color + col)
        next_color += max(gad.graph.vertex_color) + 1
        edges += [(x + offset, y + offset) for x, y in gad.graph.edges]
    pos = {x: i for i, x in enumerate(names)}
    for v, w in base.sorted_edges():
        if (v, w) in t:
            edges += [(pos[("a", v, w)], pos[("b", w, v)]), (pos[("b", v, w)], pos[("a", w, v)])]
        else:
            edges += [(pos[("a", v, w)], pos[("a", w, v)]), (pos[("b", v, w)], pos[("b", w, v)])]
    g = Graph.from_edges(len(names), edges, vertex_color=colors)
    return CFIInstance(g, base, t, tuple(names))


def cfi_vertex_count(base: Graph) -> int:
    return sum(2 * d + 2 ** (d - 1) for d in base.degrees())


# ---------------------------------------------------------------------------
# grids


def _check_side(n: int) -> None:
    if n < 2:
        raise PreconditionError(f"grid side must be >= 2 (got {n})", code="N_TOO_SMALL")


def grid_id(n: int, i: int, j: int) -> int:
    """Vertex id of the 1-based grid point ``(i, j)``."""
    return (i - 1) * n + (j - 1)


def grid(n: int) -> Graph:
    _check_side(n)
    edges = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j < n:
                edges.append((grid_id(n, i, j), grid_id(n, i, j + 1)))
            if i < n:
                edges.append((grid_id(n, i, j), grid_id(n, i + 1, j)))
    return Graph.from_edges(n * n, edges)


@dataclass(frozen=True, eq=False)
class SubdividedGrid:
    """``graph`` has the grid points first (ids as in :func:`grid`), then one
    vertex per directed grid edge ``(v, w)``, sitting next to ``v``.

    ``labels[x]`` is ``(i, j)`` for a grid point and ``((i, j), (i2, j2))``
    for a subdivision vertex.
    """

    n: int
    graph: Graph
    labels: tuple

    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}


def _directed_grid_edges(n: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for di, dj in ((-1, 0), (0, -1), (0, 1), (1, 0)):
                i2, j2 = i + di, j + dj
                if 1 <= i2 <= n and 1 <= j2 <= n:
                    out.append(((i, j), (i2, j2)))
    return out


def subdivided_grid(n: int) -> SubdividedGrid:
    _check_side(n)
    labels = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    darts = _directed_grid_edges(n)
    labels += darts
    pos = {x: k for k, x in enumerate(labels)}
    edges = []
    for v, w in darts:
        edges.append((pos[v], pos[(v, w)]))
        if v < w:
            edges.append((pos[(v, w)], pos[(w, v)]))
    return SubdividedGrid(n, Graph.from_edges(len(labels), edges), tuple(labels))


def _dart_sets(n: int, i: int, j: int) -> dict[str, list]:
    """Sets A, B, C of the grid construction, before dropping non-vertices."""
    a = [((k, j), (k, j + 1)) for k in range(1, i + 1)]
    a += [((k, j), (k, j - 1)) for k in range(i, n + 1)]
    a += [((i, j), (i + 1, j)), ((i, j), (i - 1, j))]
    b = [((k, j), (k, j + 1)) for k in range(1, i + 1)]
    b += [((k, j), (k, j - 1)) for k in range(i + 1, n + 1)]
    b += [((i, j), (i + 1, j)), ((i + 1, j), (i, j))]
    c = [((k, j), (k, j - 1)) for k in range(1, i + 1)]
    c += [((k, j - 1), (k, j)) for k in range(i, n + 1)]
    return {"A": a, "B": b, "C": c}


def grid_plus_decomposition(n: int) -> tuple[SubdividedGrid, TreeDecomposition]:
    """The explicit width ``n + 2`` decomposition of the subdivided grid.

    Nodes are ``A(i,j), B(i,j), C(i,j), D(i,j)`` in that order for each
    ``(i, j)`` in row-major order. Set members whose indices leave the grid
    are dropped.
    """
    sg = subdivided_grid(n)
    pos = sg.index()
    names = []
    bags = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            sets = _dart_sets(n, i, j)
            for kind in "ABC":
                names.append((kind, i, j))
                bags.append(frozenset(pos[x] for x in sets[kind] if x in pos))
            names.append(("D", i, j))
            v = (i, j)
            bags.append(frozenset([pos[v]] + [pos[d] for d in pos if isinstance(d[0], tuple) and d[0] == v]))
    node = {x: k for k, x in enumerate(names)}
    tedges = []
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            tedges.append((node["A", i, j], node["B", i, j]))
            tedges.append((node["A", i, j], node["D", i, j]))
            if i < n:
                tedges.append((node["C", i, j], node["C", i + 1, j]))
                tedges.append((node["B", i, j], node["A", i + 1, j]))
        tedges.append((node["C", n, j], node["A", 1, j]))
        if j < n:
            tedges.append((node["B", n, j], node["C", 1, j + 1]))
    labels = tuple(f"{k}({i},{j})" for k, i, j in names)
    return sg, TreeDecomposition(Graph.from_edges(len(names), tedges), tuple(bags), labels)


def grid_plus_properties(sg: SubdividedGrid, td: TreeDecomposition) -> bool:
    """The two structural properties: at most one grid point per bag, and a bag
    holding grid point ``v`` is exactly ``E(v) + v`` at a leaf whose neighbour
    holds no grid point."""
    grid_points = set(range(sg.n * sg.n))
    for t, bag in enumerate(td.bags):
        hit = bag & grid_points
        if len(hit) > 1:
            return False
        if hit:
            (v,) = hit
            vl = sg.labels[v]
            star = {x for x, lab in enumerate(sg.labels) if isinstance(lab[0], tuple) and lab[0] == vl}
            if bag != star | {v}:
                return False
            nb = td.tree.neighbors[t]
            if len(nb) != 1 or td.bags[next(iter(nb))] & grid_points:
                return False
    return True


def lift_decomposition_to_cfi(n: int, inst: CFIInstance) -> TreeDecomposition:
    """Lift the subdivided-grid decomposition to ``CFI_T(grid(n))`` for any ``T``."""
    g = grid(n)
    if inst.base.n != g.n or inst.base.edges != g.edges:
        raise PreconditionError(f"CFI instance is not built over grid({n})", code="BASE_MISMATCH")
    sg, td = grid_plus_decomposition(n)
    cfi_pos = inst.index()
    grid_points = set(range(n * n))

    def outer(dart) -> list[int]:
        v, w = (grid_id(n, *dart[0]), grid_id(n, *dart[1]))
        return [cfi_pos[("a", v, w)], cfi_pos[("b", v, w)]]

    new_of: dict[int, int] = {}
    bags: list[frozenset] = []
    labels: list[str] = []
    leaves = []
    for t, bag in enumerate(td.bags):
        if bag & grid_points:
            leaves.append(t)
            continue
        new_of[t] = len(bags)
        bags.append(frozenset(x for d in bag for x in outer(sg.labels[d])))
        labels.append(td.labels[t])
    tedges = [(new_of[u], new_of[v]) for u, v in td.tree.sorted_edges() if u in new_of and v in new_of]
    for t in leaves:
        (s,) = td.tree.neighbors[t]
        (v,) = td.bags[t] & grid_points
        star = sorted(inst.base.neighbors[v])
        ab = [x for w in star for x in (cfi_pos[("a", v, w)], cfi_pos[("b", v, w)])]
        for a in even_subsets(star):
            tedges.append((new_of[s], len(bags)))
            bags.append(frozenset(ab + [cfi_pos[("m", v, a)]]))
            labels.append(f"{td.labels[t]}[{','.join(map(str, a))}]")
    return TreeDecomposition(Graph.from_edges(len(bags), tedges), tuple(bags), tuple(labels))
