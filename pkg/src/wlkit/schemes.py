"""Coherent configurations read off stable 2-WL colorings.

A stable 2-WL coloring partitions ``V x V`` into relations; when the diagonal
is a single class this is an association scheme. The module also hosts the
constituent-graph classification and the distance-multiset lemma check.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .connectivity import enumerate_separators, is_cycle, is_k_connected
from .errors import PreconditionError, TheoremViolation, WLKitError
from .graph import Graph, all_pairs_distances, distance_multiset, emit_graph6, is_connected
from .wl import TupleColoring, diagonal_colors, refine_round, stable_coloring


class NotStableError(WLKitError):
    code = "NOT_STABLE"


@dataclass(frozen=True, eq=False)
class CoherentConfiguration:
    """Relations ``R_0..R_d`` as boolean ``n x n`` matrices.

    ``p[i, j, k]`` is ``p^k_{i,j}`` when the count is the same for every
    pair in ``R_k``, else ``-1``; ``intersection_numbers`` offers the same
    data as a dict with ``None`` for undefined entries.
    """

    n: int
    relations: tuple[np.ndarray, ...]
    colors: tuple[int, ...]
    transpose_map: dict[int, int | None]
    p: np.ndarray
    diagonal_relations: tuple[int, ...] = field(default=())

    @cached_property
    def intersection_numbers(self) -> dict[tuple[int, int, int], int | None]:
        d = len(self.relations)
        return {(i, j, k): (None if self.p[i, j, k] < 0 else int(self.p[i, j, k]))
                for i in range(d) for j in range(d) for k in range(d)}

    def all_defined(self) -> bool:
        return bool((self.p >= 0).all())

    @property
    def d(self) -> int:
        return len(self.relations) - 1

    def relation_pairs(self, i: int) -> list[tuple[int, int]]:
        return [tuple(p) for p in np.argwhere(self.relations[i]).tolist()]

    def sizes(self) -> list[int]:
        return [int(r.sum()) for r in self.relations]

    def is_well_defined(self, i: int, j: int, k: int) -> bool:
        return bool(self.p[i, j, k] >= 0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "relation_sizes": self.sizes(),
            "diagonal_relations": list(self.diagonal_relations),
            "transpose_map": {str(i): j for i, j in self.transpose_map.items()},
            "intersection_numbers": [[i, j, k, v] for (i, j, k), v in sorted(self.intersection_numbers.items())],
            "is_association_scheme": verify_scheme_axioms(self),
        }


def configuration_from_coloring(g: Graph, c: TupleColoring) -> CoherentConfiguration:
    if c.k != 2 or c.n != g.n:
        raise PreconditionError("need a 2-WL coloring of g")
    if refine_round(g, c).num_classes != c.num_classes:
        raise NotStableError("coloring still refines under another round")
    n = g.n
    P = c.pair_matrix()
    diag = set(diagonal_colors(c))
    ids = sorted(set(P.reshape(-1).tolist()))
    # diagonal relations first, in color-id order; a unique diagonal class becomes R_0
    ids = [x for x in ids if x in diag] + [x for x in ids if x not in diag]
    relations = []
    for col in ids:
        r = P == col
        r.setflags(write=False)
        relations.append(r)
    pos = {col: i for i, col in enumerate(ids)}
    transpose = {}
    for i, r in enumerate(relations):
        cols = set(P.T[r].tolist())
        transpose[i] = pos[cols.pop()] if len(cols) == 1 and np.array_equal(relations[pos[P.T[r][0]]], r.T) else None
    d = len(relations)
    stack = np.stack(relations).astype(np.int64) if d else np.zeros((0, n, n), dtype=np.int64)
    # counts[i, j, v, w] = #{x : (v, x) in R_i and (w, x) in R_j}
    counts = np.einsum("ivx,jwx->ijvw", stack, stack).reshape(d * d, n * n)
    label = np.argmax(stack.reshape(d, n * n), axis=0) if d else np.zeros(0, dtype=np.int64)
    order = np.argsort(label, kind="stable")
    starts = np.searchsorted(label[order], np.arange(d))
    lo = np.minimum.reduceat(counts[:, order], starts, axis=1) if d else counts
    hi = np.maximum.reduceat(counts[:, order], starts, axis=1) if d else counts
    numbers = np.where(lo == hi, lo, -1).reshape(d, d, d)
    return CoherentConfiguration(n, tuple(relations), tuple(ids), transpose, numbers,
                                 tuple(range(len(diag))))


def configuration_of(g: Graph) -> CoherentConfiguration:
    return configuration_from_coloring(g, stable_coloring(g, 2))


def brute_intersection_number(cfg: CoherentConfiguration, i: int, j: int, k: int) -> int | None:
    """Direct triple loop over all (v, w) in R_k; the matrix-product route is checked against this."""
    values = set()
    R = cfg.relations
    for v, w in cfg.relation_pairs(k):
        values.add(sum(1 for x in range(cfg.n) if R[i][v, x] and R[j][w, x]))
    return values.pop() if len(values) == 1 else None


def verify_scheme_axioms(cfg: CoherentConfiguration) -> bool:
    """R_0 is exactly the diagonal, transposes are relations, all p-numbers exist."""
    if cfg.n == 0:
        return True
    if not np.array_equal(cfg.relations[0], np.eye(cfg.n, dtype=bool)):
        return False
    if any(j is None for j in cfg.transpose_map.values()):
        return False
    return cfg.all_defined()


def verify_coherence(cfg: CoherentConfiguration) -> bool:
    """Axioms every stable 2-WL configuration satisfies, one diagonal class or not."""
    union = np.zeros((cfg.n, cfg.n), dtype=np.int64)
    for r in cfg.relations:
        union += r
    if not (union == 1).all():
        return False
    diag_union = sum(cfg.relations[i] for i in cfg.diagonal_relations) if cfg.diagonal_relations else 0
    if cfg.n and not np.array_equal(np.asarray(diag_union, dtype=bool), np.eye(cfg.n, dtype=bool)):
        return False
    if any(j is None for j in cfg.transpose_map.values()):
        return False
    return cfg.all_defined()


def row_sum_consistent(cfg: CoherentConfiguration) -> bool:
    """sum_j p^k_{i,j} equals the out-degree of any v in R_i, for (v, w) in R_k."""
    for k, rk in enumerate(cfg.relations):
        pairs = np.argwhere(rk)
        if not len(pairs):
            continue
        v = pairs[0][0]
        for i, ri in enumerate(cfg.relations):
            if int(np.maximum(cfg.p[i, :, k], 0).sum()) != int(ri[v].sum()):
                return False
    return True


def constituent_graph(cfg: CoherentConfiguration, i: int) -> Graph:
    if i < 1 or i in cfg.diagonal_relations or i >= len(cfg.relations):
        raise PreconditionError(f"relation {i} is diagonal or out of range", code="DIAGONAL_RELATION")
    r = cfg.relations[i]
    edges = {(min(u, v), max(u, v)) for u, v in np.argwhere(r | r.T).tolist() if u != v}
    return Graph(cfg.n, frozenset(edges))


class Verdict(enum.Enum):
    DISCONNECTED = "DISCONNECTED"
    THREE_CONNECTED = "THREE_CONNECTED"
    CYCLE = "CYCLE"


@dataclass(frozen=True)
class ConstituentClassification:
    verdict: Verdict
    cycle_length: int | None = None


def classify_constituent(g: Graph) -> ConstituentClassification:
    """Disconnected, 3-connected, or a cycle of length >= 4: exactly one applies
    to every graph whose stable 2-WL diagonal is a single color."""
    if len(set(diagonal_colors(stable_coloring(g, 2)))) > 1:
        raise PreconditionError("stable 2-WL coloring has more than one diagonal color")
    cases = []
    if not is_connected(g):
        cases.append(ConstituentClassification(Verdict.DISCONNECTED))
    if is_k_connected(g, 3):
        cases.append(ConstituentClassification(Verdict.THREE_CONNECTED))
    if is_cycle(g) and g.n >= 4:
        cases.append(ConstituentClassification(Verdict.CYCLE, g.n))
    if len(cases) != 1:
        raise TheoremViolation(f"graph {emit_graph6(g)} satisfies {len(cases)} of the three cases")
    return cases[0]


def check_distance_multiset_lemma(g: Graph) -> bool:
    """For each edge uv with D(u) = D(v), compare the 'closer to u' and
    'closer to v' conditional distance multisets."""
    dist = all_pairs_distances(g)
    for u, v in g.sorted_edges():
        if distance_multiset(g, u, dist) != distance_multiset(g, v, dist):
            continue
        du, dv = dist.row(u), dist.row(v)
        closer_u = Counter(a for a, b in zip(du, dv) if a < b)
        closer_v = Counter(b for a, b in zip(du, dv) if b < a)
        if closer_u != closer_v:
            return False
    return True


def two_color_cycle_check(g: Graph) -> tuple[bool, bool]:
    """``(applies, holds)`` for the two-color cycle theorem on a 2-connected graph.

    Applies when some 2-separator {w1, w2} has diagonal colors covering every
    vertex color; the conclusion is that ``g`` is a cycle.
    """
    if not is_k_connected(g, 2):
        raise PreconditionError("two-color cycle check needs a 2-connected graph")
    diag = diagonal_colors(stable_coloring(g, 2))
    palette = set(diag)
    if len(palette) > 2:
        return False, True
    applies = any(palette <= {diag[a], diag[b]} for a, b in enumerate_separators(g, 2).separators)
    return applies, (not applies) or is_cycle(g)
