"""k-dimensional Weisfeiler-Leman refinement.

Colorings of ``V^k`` are stored as flat ``int64`` arrays indexed by the
mixed-radix rank ``v_1 n^{k-1} + ... + v_k``. Every refinement round opens a
new *epoch* in a :class:`SharedColorTable`; within an epoch the color ids are
``0..c-1`` and are handed out in lexicographic order of the (integer tuple)
signatures. Graphs refined against the same table in the same rounds therefore
get directly comparable color ids.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, WLKitError
from .graph import Graph

# rows x n int64 entries materialized per chunk during refinement
_CHUNK_ENTRIES = 1 << 22


class TableMismatch(WLKitError):
    code = "TABLE_MISMATCH"


class SharedColorTable:
    """Injective map from canonical signatures to dense color ids, per round.

    ``log`` records every batch of newly inserted signatures as
    ``(epoch, first_id, count)`` so determinism can be audited.
    """

    def __init__(self, k: int | None = None):
        self.k = k
        self._epochs: list[dict[tuple, int]] = []
        self.log: list[tuple[int, int, int]] = []

    def epoch_size(self, epoch: int) -> int:
        return len(self._epochs[epoch]) if epoch < len(self._epochs) else 0

    @property
    def num_epochs(self) -> int:
        return len(self._epochs)

    def _bind(self, k: int) -> None:
        if self.k is None:
            self.k = k
        elif self.k != k:
            raise TableMismatch(f"table holds {self.k}-tuple colors, got k={k}")

    def assign(self, epoch: int, signatures) -> list[int]:
        """Ids for ``signatures`` in ``epoch``; unseen ones are added in sorted order."""
        while len(self._epochs) <= epoch:
            self._epochs.append({})
        ids = self._epochs[epoch]
        fresh = sorted({s for s in signatures if s not in ids})
        if fresh:
            self.log.append((epoch, len(ids), len(fresh)))
            for s in fresh:
                ids[s] = len(ids)
        return [ids[s] for s in signatures]

    def signature_of(self, epoch: int, color: int) -> tuple:
        for s, c in self._epochs[epoch].items():
            if c == color:
                return s
        raise KeyError(color)


@dataclass(frozen=True, eq=False)
class TupleColoring:
    """Coloring of all ``n**k`` vertex k-tuples (vertices when ``k == 1``)."""

    k: int
    n: int
    colors: np.ndarray
    round: int
    table_epoch: int
    table: SharedColorTable = field(repr=False)

    @property
    def num_classes(self) -> int:
        return int(np.unique(self.colors).size)

    def index(self, tup) -> int:
        idx = 0
        for v in tup:
            idx = idx * self.n + v
        return idx

    def tuple_at(self, idx: int) -> tuple:
        out = []
        for _ in range(self.k):
            idx, r = divmod(idx, self.n)
            out.append(r)
        return tuple(reversed(out))

    def color(self, *tup) -> int:
        if len(tup) == 1 and isinstance(tup[0], tuple):
            tup = tup[0]
        return int(self.colors[self.index(tup)])

    def histogram(self) -> Counter:
        vals, counts = np.unique(self.colors, return_counts=True)
        return Counter(dict(zip(vals.tolist(), counts.tolist())))

    def partition(self) -> list[list[int]]:
        """Classes as sorted lists of flat tuple indices, ordered by least member."""
        order = np.argsort(self.colors, kind="stable")
        sorted_colors = self.colors[order]
        cuts = np.flatnonzero(np.diff(sorted_colors)) + 1
        classes = [grp.tolist() for grp in np.split(order, cuts)] if order.size else []
        return sorted(classes, key=lambda c: c[0])

    def canonical_partition(self) -> tuple[int, ...]:
        """Class labels renumbered by first occurrence; equal iff partitions are equal."""
        _, first, inv = np.unique(self.colors, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return tuple(rank[inv].tolist())

    def pair_matrix(self) -> np.ndarray:
        if self.k != 2:
            raise PreconditionError("pair_matrix needs k = 2", code="K_TOO_SMALL" if self.k < 2 else "PRECONDITION_FAILED")
        return self.colors.reshape(self.n, self.n)

    def dump(self) -> dict:
        """Per color id: class size and the lexicographically least tuple."""
        classes = []
        vals, first, counts = np.unique(self.colors, return_index=True, return_counts=True)
        for c, f, cnt in zip(vals.tolist(), first.tolist(), counts.tolist()):
            classes.append({"color": c, "size": cnt, "representative": list(self.tuple_at(f))})
        return {"k": self.k, "n": self.n, "round": self.round, "epoch": self.table_epoch,
                "num_classes": len(classes), "classes": classes}


def _tuples(n: int, k: int) -> np.ndarray:
    """All k-tuples in rank order, shape (n**k, k)."""
    if n == 0:
        return np.zeros((0, k), dtype=np.int64)
    grids = np.indices((n,) * k, dtype=np.int64)
    return grids.reshape(k, -1).T


def _unique_rows(rows: np.ndarray) -> tuple[list[tuple], np.ndarray]:
    if rows.shape[0] == 0:
        return [], np.zeros(0, dtype=np.int64)
    uniq, inv = np.unique(rows, axis=0, return_inverse=True)
    return [tuple(r) for r in uniq.tolist()], inv.reshape(-1)


def _atomic_rows(g: Graph, k: int) -> np.ndarray:
    n = g.n
    if k == 1:
        cols = [np.array([g.color(v) for v in range(n)], dtype=np.int64)]
        if g.arc_color is not None:
            cols.append(np.array([g.arc_color[(v, v)] for v in range(n)], dtype=np.int64))
        return np.stack(cols, axis=1) if n else np.zeros((0, len(cols)), dtype=np.int64)
    t = _tuples(n, k)
    adj = g.adjacency
    cols = []
    # pattern code per unordered position pair: 0 equal, 1 adjacent, 2 neither
    for i, j in itertools.combinations(range(k), 2):
        a, b = t[:, i], t[:, j]
        cols.append(np.where(a == b, 0, np.where(adj[a, b], 1, 2)))
    vc = np.array([g.color(v) for v in range(n)], dtype=np.int64)
    for i in range(k):
        cols.append(vc[t[:, i]])
    if g.arc_color is not None:
        arc = np.full((n, n), -1, dtype=np.int64)
        for (u, v), c in g.arc_color.items():
            arc[u, v] = c
        for i in range(k):
            for j in range(k):
                cols.append(arc[t[:, i], t[:, j]])
    return np.stack(cols, axis=1).astype(np.int64)


def _finish(table: SharedColorTable, epoch: int, per_graph) -> list[np.ndarray]:
    """Assign ids jointly for several graphs' (unique rows, inverse) pairs."""
    allsigs = sorted({s for sigs, _ in per_graph for s in sigs})
    table.assign(epoch, allsigs)
    out = []
    for sigs, inv in per_graph:
        ids = np.array(table.assign(epoch, sigs), dtype=np.int64)
        out.append(ids[inv] if inv.size else np.zeros(0, dtype=np.int64))
    return out


def _make(k, n, colors, rnd, table) -> TupleColoring:
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    colors.setflags(write=False)
    return TupleColoring(k, n, colors, rnd, rnd, table)


def _initial_many(graphs, k, table):
    if k < 1:
        raise PreconditionError("dimension k must be >= 1", code="K_ZERO")
    table._bind(k)
    per_graph = [_unique_rows(_atomic_rows(g, k)) for g in graphs]
    arrays = _finish(table, 0, per_graph)
    return [_make(k, g.n, a, 0, table) for g, a in zip(graphs, arrays)]


def initial_coloring(g: Graph, k: int, table: SharedColorTable | None = None) -> TupleColoring:
    """Color each k-tuple by the isomorphism type of its ordered colored subgraph.

    For ``k == 1`` this is just the vertex color.
    """
    if table is None:
        table = SharedColorTable()
    return _initial_many([g], k, table)[0]


def _k1_rows(g: Graph, c: TupleColoring, width: int) -> np.ndarray:
    n = g.n
    old = c.colors
    if g.arc_color is None:
        onehot = np.zeros((n, width), dtype=np.int64)
        onehot[np.arange(n), old] = 1
        counts = g.adjacency.astype(np.int64) @ onehot
    else:
        n_arc = max(g.arc_color.values()) + 1
        counts = np.zeros((n, n_arc * width), dtype=np.int64)
        for (u, v), a in g.arc_color.items():
            if u != v:
                counts[u, a * width + old[v]] += 1
    return np.concatenate([old[:, None], counts], axis=1)


def _kwl_chunk(old: np.ndarray, n: int, k: int, width: int, lo: int, hi: int) -> tuple[list[tuple], np.ndarray]:
    idx = np.arange(lo, hi, dtype=np.int64)
    w = np.arange(n, dtype=np.int64)
    combined = None
    parts = []
    for i in range(k):
        stride = n ** (k - 1 - i)
        vi = (idx // stride) % n
        base = idx - vi * stride
        parts.append(old[base[:, None] + w[None, :] * stride])
    if width ** k < (1 << 62):
        combined = np.zeros((hi - lo, n), dtype=np.int64)
        for p in parts:
            combined = combined * width + p
    else:
        stacked = np.stack([p.reshape(-1) for p in parts], axis=1)
        _, inv = np.unique(stacked, axis=0, return_inverse=True)
        combined = inv.reshape(hi - lo, n).astype(np.int64)
    combined.sort(axis=1)
    rows = np.concatenate([old[lo:hi, None], combined], axis=1)
    return _unique_rows(rows)


def _kwl_rows(g: Graph, c: TupleColoring, width: int, threads: int, chunk_entries: int):
    n, k = g.n, c.k
    total = n ** k
    if total == 0:
        return [], np.zeros(0, dtype=np.int64)
    step = max(1, chunk_entries // max(n, 1))
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda b: _kwl_chunk(c.colors, n, k, width, *b), bounds))
    else:
        chunks = [_kwl_chunk(c.colors, n, k, width, *b) for b in bounds]
    if len(chunks) == 1:
        return chunks[0]
    # single-owner merge, independent of the schedule that produced the chunks
    sigs = sorted({s for cs, _ in chunks for s in cs})
    pos = {s: i for i, s in enumerate(sigs)}
    inv = np.concatenate([np.array([pos[s] for s in cs], dtype=np.int64)[ci] for cs, ci in chunks])
    return sigs, inv


def _refine_many(graphs, colorings, table, threads=1, chunk_entries=_CHUNK_ENTRIES):
    epochs = {c.table_epoch for c in colorings}
    for g, c in zip(graphs, colorings):
        if c.table is not table:
            raise TableMismatch("coloring was produced with a different color table")
        if c.n != g.n:
            raise TableMismatch(f"coloring is for n={c.n}, graph has n={g.n}")
    if len(epochs) != 1:
        raise TableMismatch("colorings must come from the same round to be refined jointly")
    epoch = epochs.pop()
    width = table.epoch_size(epoch)
    per_graph = []
    for g, c in zip(graphs, colorings):
        if c.k == 1:
            per_graph.append(_unique_rows(_k1_rows(g, c, width)))
        else:
            per_graph.append(_kwl_rows(g, c, width, threads, chunk_entries))
    arrays = _finish(table, epoch + 1, per_graph)
    return [_make(c.k, c.n, a, c.round + 1, table) for c, a in zip(colorings, arrays)]


def refine_round(g: Graph, c: TupleColoring, table: SharedColorTable | None = None, *,
                 threads: int = 1) -> TupleColoring:
    """One WL round: new color = (old color, sorted multiset of substitution color vectors)."""
    if table is None:
        table = c.table
    return _refine_many([g], [c], table, threads)[0]


def _distinct(colorings) -> int:
    return int(np.unique(np.concatenate([c.colors for c in colorings]) if colorings else []).size)


def _run_to_fixpoint(graphs, k, table, threads=1, max_rounds=None, chunk_entries=_CHUNK_ENTRIES):
    cur = _initial_many(graphs, k, table)
    count = _distinct(cur)
    bound = max(1, max(g.n for g in graphs) ** k) if graphs else 1
    while max_rounds is None or cur[0].round < max_rounds:
        nxt = _refine_many(graphs, cur, table, threads, chunk_entries)
        new_count = _distinct(nxt)
        cur = nxt
        if new_count == count:
            break
        count = new_count
        assert cur[0].round <= bound, "refinement exceeded n^k strict refinements"
    return cur


def stable_coloring(g: Graph, k: int, table: SharedColorTable | None = None, *,
                    threads: int = 1, max_rounds: int | None = None) -> TupleColoring:
    """Refine until the partition stops splitting.

    The returned coloring is the one computed in the first non-splitting
    round, so ``round`` counts every round that was run.
    """
    if table is None:
        table = SharedColorTable()
    return _run_to_fixpoint([g], k, table, threads, max_rounds)[0]


def joint_stable_coloring(g: Graph, h: Graph, k: int, *, threads: int = 1,
                          table: SharedColorTable | None = None) -> tuple[TupleColoring, TupleColoring]:
    """Refine ``g`` and ``h`` in lockstep against one table.

    A round counts as progress when the partition of the combined tuple set
    splits, which covers a split inside either graph.
    """
    if table is None:
        table = SharedColorTable()
    cg, ch = _run_to_fixpoint([g, h], k, table, threads)
    return cg, ch


def equivalent_k(g: Graph, h: Graph, k: int, *, threads: int = 1) -> bool:
    """True iff k-WL does not distinguish ``g`` and ``h``."""
    if g.n != h.n:
        return False
    cg, ch = joint_stable_coloring(g, h, k, threads=threads)
    return cg.histogram() == ch.histogram()


def vertex_color_classes(c: TupleColoring) -> list[list[int]]:
    """Partition of V by the color of the diagonal tuple (v, ..., v)."""
    if c.k < 2:
        raise PreconditionError("vertex classes are read off the diagonal, which needs k >= 2", code="K_TOO_SMALL")
    diag = diagonal_colors(c)
    classes: dict[int, list[int]] = {}
    for v, col in enumerate(diag):
        classes.setdefault(col, []).append(v)
    return [classes[col] for col in sorted(classes)]


def diagonal_colors(c: TupleColoring) -> list[int]:
    step = sum(c.n ** i for i in range(c.k))
    return c.colors[np.arange(c.n) * step].tolist()


def wl_certificate(g: Graph, k: int) -> tuple:
    """Isomorphism invariant with: cert(g) == cert(h) iff equivalent_k(g, h).

    Records, per round, the sorted signature multiset of a private
    refinement run. Color ids inside signatures are ranks among that round's
    signatures, so equal prefixes imply identical joint id assignments.
    """
    table = SharedColorTable()
    cur = _initial_many([g], k, table)
    rounds = [_signature_multiset(table, cur[0])]
    count = cur[0].num_classes
    while True:
        cur = _refine_many([g], cur, table)
        rounds.append(_signature_multiset(table, cur[0]))
        new_count = cur[0].num_classes
        if new_count == count:
            break
        count = new_count
    return (g.n, k, tuple(rounds))


def _signature_multiset(table: SharedColorTable, c: TupleColoring) -> tuple:
    by_id = {v: s for s, v in table._epochs[c.table_epoch].items()}
    hist = c.histogram()
    return tuple((by_id[col], cnt) for col, cnt in sorted(hist.items()))


def dump_json(c: TupleColoring) -> str:
    return json.dumps(c.dump(), indent=1)


def dump_text(c: TupleColoring) -> str:
    d = c.dump()
    lines = [f"# k={d['k']} n={d['n']} rounds={d['round']} classes={d['num_classes']}"]
    for cl in d["classes"]:
        rep = " ".join(map(str, cl["representative"]))
        lines.append(f"{cl['color']}\t{cl['size']}\t{rep}")
    return "\n".join(lines) + "\n"
