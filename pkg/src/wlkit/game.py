"""Exact solver for the bijective k-pebble game on tiny graphs.

Positions of length ``l`` are indexed by the mixed-radix ranks of the two
vertex tuples, so the Duplicator-winning set for each length is an
``n**l x n**l`` boolean matrix. The solver computes the greatest fixpoint:
start from all positions that are not immediately lost and repeatedly drop
positions from which Spoiler can force his way out of the set.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ResourceGuardError
from .graph import Graph

GAME_MAX_N = 7
GAME_MAX_K = 3


class Winner(enum.Enum):
    SPOILER = "SPOILER"
    DUPLICATOR = "DUPLICATOR"


@dataclass(frozen=True)
class GamePosition:
    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise PreconditionError("pebble tuples must have equal length")


@dataclass(frozen=True)
class GameVerdict:
    winner: Winner
    start: GamePosition
    reason: str = ""


def position_is_losing_now(g: Graph, h: Graph, p: GamePosition) -> bool:
    """Spoiler has already won: the pebbled ordered colored subgraphs differ."""
    v, w = p.left, p.right
    for i in range(len(v)):
        if g.color(v[i]) != h.color(w[i]):
            return True
        for j in range(len(v)):
            if (v[i] == v[j]) != (w[i] == w[j]):
                return True
            if g.has_edge(v[i], v[j]) != h.has_edge(w[i], w[j]):
                return True
    return False


def _has_perfect_matching(allowed: np.ndarray) -> bool:
    n = allowed.shape[0]
    match_right = [-1] * n
    rows = [np.flatnonzero(allowed[i]).tolist() for i in range(n)]
    if any(not r for r in rows):
        return False

    def augment(u, seen):
        for w in rows[u]:
            if not seen[w]:
                seen[w] = True
                if match_right[w] < 0 or augment(match_right[w], seen):
                    match_right[w] = u
                    return True
        return False

    return all(augment(u, [False] * n) for u in range(n))


def _atomic_ids(g: Graph, h: Graph, length: int):
    """Per length-l tuple of each graph, an id of its ordered colored type."""
    if length == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)

    def rows(gr):
        t = np.array(list(itertools.product(range(gr.n), repeat=length)), dtype=np.int64)
        cols = [np.array([gr.color(x) for x in range(gr.n)], dtype=np.int64)[t[:, i]] for i in range(length)]
        adj = gr.adjacency
        for i, j in itertools.combinations(range(length), 2):
            a, b = t[:, i], t[:, j]
            cols.append(np.where(a == b, 0, np.where(adj[a, b], 1, 2)))
        return np.stack(cols, axis=1) if cols else np.zeros((t.shape[0], 0), dtype=np.int64)

    rg, rh = rows(g), rows(h)
    if rg.shape[1] == 0:
        return np.zeros(rg.shape[0], dtype=np.int64), np.zeros(rh.shape[0], dtype=np.int64)
    _, inv = np.unique(np.concatenate([rg, rh]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return inv[:rg.shape[0]], inv[rg.shape[0]:]


class GameSolver:
    """Winning regions of BP_k(g, h) for every position at once."""

    def __init__(self, g: Graph, h: Graph, k: int):
        if g.n != h.n:
            raise PreconditionError(f"orders differ ({g.n} vs {h.n})", code="ORDER_MISMATCH")
        if g.n > GAME_MAX_N or k > GAME_MAX_K:
            raise ResourceGuardError(f"game solver limited to n <= {GAME_MAX_N}, k <= {GAME_MAX_K}")
        if k < 1:
            raise PreconditionError("need at least one pebble pair")
        self.g, self.h, self.k, self.n = g, h, k, g.n
        self.history: list[int] = []
        self._solve()

    def _solve(self):
        n, k = self.n, self.k
        win = []
        for length in range(k + 1):
            ig, ih = _atomic_ids(self.g, self.h, length)
            win.append(ig[:, None] == ih[None, :])
        # drop_maps[l][i][r] = rank of the tuple of rank r with position i removed
        drop_maps = [None]
        for length in range(1, k + 1):
            r = np.arange(n ** length, dtype=np.int64)
            maps = []
            for i in range(length):
                hi_stride = n ** (length - i)
                lo_stride = n ** (length - 1 - i)
                maps.append((r // hi_stride) * lo_stride + r % lo_stride)
            drop_maps.append(maps)

        self.history.append(sum(int(w.sum()) for w in win))
        changed = True
        while changed:
            changed = False
            for length in range(k, -1, -1):
                w = win[length]
                new = w.copy()
                for dm in drop_maps[length] or ():
                    new &= win[length - 1][np.ix_(dm, dm)]
                if length < k:
                    nxt = win[length + 1].reshape(n ** length, n, n ** length, n)
                    for a, b in zip(*np.nonzero(new)):
                        if not _has_perfect_matching(nxt[a, :, b, :]):
                            new[a, b] = False
                if not np.array_equal(new, w):
                    win[length] = new
                    changed = True
            self.history.append(sum(int(w.sum()) for w in win))
        self._win = win

    def _rank(self, tup) -> int:
        r = 0
        for x in tup:
            r = r * self.n + x
        return r

    def duplicator_wins(self, p: GamePosition) -> bool:
        if len(p.left) > self.k:
            raise PreconditionError(f"position has more than {self.k} pebbles")
        return bool(self._win[len(p.left)][self._rank(p.left), self._rank(p.right)])

    def winner(self, p: GamePosition = GamePosition()) -> Winner:
        return Winner.DUPLICATOR if self.duplicator_wins(p) else Winner.SPOILER

    def winning_positions(self, length: int) -> np.ndarray:
        return self._win[length]


def solve_game(g: Graph, h: Graph, k: int, start: GamePosition = GamePosition()) -> GameVerdict:
    if g.n != h.n:
        # no bijection exists, so Spoiler wins as soon as he places a pebble
        if max(g.n, h.n) > GAME_MAX_N or k > GAME_MAX_K:
            raise ResourceGuardError(f"game solver limited to n <= {GAME_MAX_N}, k <= {GAME_MAX_K}")
        return GameVerdict(Winner.SPOILER, start, "ORDER_MISMATCH")
    return GameVerdict(GameSolver(g, h, k).winner(start), start)


def verify_game_wl_correspondence(g: Graph, h: Graph, k: int) -> bool:
    """Does ``equivalent_k`` agree with the outcome of BP_{k+1}?"""
    from .wl import equivalent_k

    dup = solve_game(g, h, k + 1).winner is Winner.DUPLICATOR
    return equivalent_k(g, h, k) == dup
