"""Editing sets, graph editing, and exact small-graph solving.

The exact solver exploits the recursive structure of cographs: every
cograph on at least two vertices splits into two parts with either no
edges or all edges between them.  A subset dynamic program over the
2^n vertex subsets therefore finds the optimal editing cost in
O(3^n) split evaluations, which is far faster than enumerating edge
subsets and stays exact for weighted instances.

Enumeration of *all* optimal deletion sets (a test oracle) and the
safety verifier for branching rules live here as well, both behind a
hard size cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import (
    INF,
    InputError,
    WeightedGraph,
    bits,
    checked_cost,
    find_p4,
)

SIGMAS = ("deletion", "insertion", "both")

# Largest table value tolerated before the int64 fast path is abandoned.
_NUMPY_VALUE_LIMIT = 2**60


class SizeCapExceeded(RuntimeError):
    """Refused: the requested exhaustive computation is over the size cap."""


def _normalize_pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise InputError(f"pair ({u},{v}) is a self-pair")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EditingSet:
    """A set of vertex pairs to toggle, tagged with the allowed direction."""

    pairs: frozenset[tuple[int, int]]
    sigma: str = "deletion"

    def __post_init__(self):
        if self.sigma not in SIGMAS:
            raise InputError(f"unknown sigma {self.sigma!r}")
        object.__setattr__(
            self, "pairs", frozenset(_normalize_pair(u, v) for u, v in self.pairs)
        )

    def cost(self, g: WeightedGraph) -> int:
        return g.cost_of(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def __le__(self, other: "EditingSet") -> bool:
        return self.pairs <= other.pairs


@dataclass(frozen=True)
class SolveOutcome:
    cost: int | float
    solution: EditingSet | None

    def __post_init__(self):
        assert (self.cost == INF) == (self.solution is None)


def deletion_set(pairs: Iterable[tuple[int, int]]) -> EditingSet:
    return EditingSet(frozenset(tuple(p) for p in pairs), "deletion")


def apply(g: WeightedGraph, es: EditingSet) -> WeightedGraph:
    """Toggle the pairs of es in g (symmetric difference on the edge set)."""
    for u, v in es.pairs:
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise InputError(f"pair ({u},{v}) references unknown vertex")
        if es.sigma == "deletion" and not g.has_edge(u, v):
            raise InputError(f"deletion pair ({u},{v}) is not an edge")
        if es.sigma == "insertion" and g.has_edge(u, v):
            raise InputError(f"insertion pair ({u},{v}) is already an edge")
    edges = set(g.edges())
    for p in es.pairs:
        if p in edges:
            edges.remove(p)
        else:
            edges.add(p)
    return WeightedGraph(g.n, edges, g.weights)


# -- subset tables ------------------------------------------------------


def _subset_tables(g: WeightedGraph) -> tuple[list[int], list[int]]:
    """wsum[S] = total vertex weight of S; win[S] = pair-cost of edges inside S."""
    n = g.n
    size = 1 << n
    wsum = [0] * size
    win = [0] * size
    for s in range(1, size):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        wsum[s] = wsum[rest] + g.weights[v]
        win[s] = win[rest] + g.weights[v] * wsum[g.adj[v] & rest]
    checked_cost(win[size - 1])
    return wsum, win


_SPLIT_CACHE: dict[int, list[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]] = {}


def _split_layers(n: int):
    """Anchored proper splits of every mask, grouped by popcount layer.

    Layer p holds, for every mask S with p set bits, all submasks A that
    contain the lowest bit of S with A != S.  Stored flat so each DP layer
    is one vectorized pass plus a segmented minimum.
    """
    if n in _SPLIT_CACHE:
        return _SPLIT_CACHE[n]
    by_pc: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        by_pc[s.bit_count()].append(s)
    layers = []
    for p in range(2, n + 1):
        masks = by_pc[p]
        flat: list[int] = []
        starts: list[int] = []
        for s in masks:
            anchor = s & -s
            rest = s ^ anchor
            starts.append(len(flat))
            t = 0
            while True:
                if t != rest:
                    flat.append(anchor | t)
                t = (t - rest) & rest
                if t == 0:
                    break
        s_arr = np.asarray(masks, dtype=np.int64)
        starts_arr = np.asarray(starts, dtype=np.int64)
        flat_arr = np.asarray(flat, dtype=np.int64)
        counts = np.diff(np.append(starts_arr, len(flat)))
        s_rep = np.repeat(s_arr, counts)
        layers.append((s_arr, starts_arr, flat_arr, s_rep))
    _SPLIT_CACHE[n] = layers
    return layers


def _dp_numpy(g: WeightedGraph, sigma: str) -> list[int] | None:
    if g.n > 15:  # split-layer cache would get too large
        return None
    wsum_l, win_l = _subset_tables(g)
    full = (1 << g.n) - 1
    if wsum_l[full] ** 2 >= _NUMPY_VALUE_LIMIT or 4 * win_l[full] >= _NUMPY_VALUE_LIMIT:
        return None
    wsum = np.asarray(wsum_l, dtype=np.int64)
    win = np.asarray(win_l, dtype=np.int64)
    opt = np.zeros(1 << g.n, dtype=np.int64)
    for s_arr, starts, a_arr, s_rep in _split_layers(g.n):
        b_arr = s_rep ^ a_arr
        cross = win[s_rep] - win[a_arr] - win[b_arr]
        subcost = opt[a_arr] + opt[b_arr]
        if sigma == "deletion":
            vals = cross + subcost
            joinable = cross == wsum[a_arr] * wsum[b_arr]
            np.minimum(vals, np.where(joinable, subcost, vals), out=vals)
        elif sigma == "insertion":
            vals = (wsum[a_arr] * wsum[b_arr] - cross) + subcost
            np.minimum(vals, np.where(cross == 0, subcost, vals), out=vals)
        else:
            vals = np.minimum(cross, wsum[a_arr] * wsum[b_arr] - cross) + subcost
        opt[s_arr] = np.minimum.reduceat(vals, starts)
    return opt.tolist()


def _iter_anchored_splits(s: int):
    """Yield (A, B) with A|B = s, A&B = 0, A containing the low bit, ascending A."""
    anchor = s & -s
    rest = s ^ anchor
    t = 0
    while True:
        if t != rest:
            yield anchor | t, rest ^ t
        t = (t - rest) & rest
        if t == 0:
            return


def _dp_python(g: WeightedGraph, sigma: str) -> list[int]:
    wsum, win = _subset_tables(g)
    size = 1 << g.n
    opt = [0] * size
    for s in range(size):
        if s.bit_count() <= 1:
            continue
        best = None
        for a, b in _iter_anchored_splits(s):
            cross = win[s] - win[a] - win[b]
            sub = opt[a] + opt[b]
            if sigma == "deletion":
                val = cross + sub
                if cross == wsum[a] * wsum[b]:
                    val = min(val, sub)
            elif sigma == "insertion":
                val = (wsum[a] * wsum[b] - cross) + sub
                if cross == 0:
                    val = min(val, sub)
            else:
                val = min(cross, wsum[a] * wsum[b] - cross) + sub
            if best is None or val < best:
                best = val
        opt[s] = best
    return opt


def _reconstruct(
    g: WeightedGraph, opt: Sequence[int], sigma: str
) -> frozenset[tuple[int, int]]:
    wsum, win = _subset_tables(g)
    pairs: list[tuple[int, int]] = []

    def cross_pairs(a: int, b: int, want_edges: bool):
        for u in bits(a):
            row = g.adj[u] & b if want_edges else ~g.adj[u] & b
            for v in bits(row):
                pairs.append(_normalize_pair(u, v))

    stack = [( (1 << g.n) - 1 )]
    while stack:
        s = stack.pop()
        if s.bit_count() <= 1:
            continue
        target = opt[s]
        for a, b in _iter_anchored_splits(s):
            cross = win[s] - win[a] - win[b]
            sub = opt[a] + opt[b]
            full = wsum[a] * wsum[b]
            if sigma == "deletion":
                if cross + sub == target:
                    cross_pairs(a, b, True)
                    break
                if cross == full and sub == target:
                    break
            elif sigma == "insertion":
                if cross == 0 and sub == target:
                    break
                if (full - cross) + sub == target:
                    cross_pairs(a, b, False)
                    break
            else:
                if cross <= full - cross and cross + sub == target:
                    cross_pairs(a, b, True)
                    break
                if (full - cross) + sub == target:
                    cross_pairs(a, b, False)
                    break
        else:
            raise AssertionError("no split reproduces the table value")
        stack.append(a)
        stack.append(b)
    return frozenset(pairs)


def brute_solve(
    g: WeightedGraph, k: int | float = INF, sigma: str = "deletion"
) -> SolveOutcome:
    """Optimal editing set making g P4-free, or INF if its cost exceeds k.

    Exact for any size, but intended for graphs below the driver's
    recursion threshold; cost grows as 3^n.
    """
    if sigma not in SIGMAS:
        raise InputError(f"unknown sigma {sigma!r}")
    if g.n <= 1 or find_p4(g) is None:
        empty = EditingSet(frozenset(), sigma)
        return SolveOutcome(0, empty) if k >= 0 else SolveOutcome(INF, None)
    opt = _dp_numpy(g, sigma)
    if opt is None:
        opt = _dp_python(g, sigma)
    best = opt[(1 << g.n) - 1]
    if best > k:
        return SolveOutcome(INF, None)
    return SolveOutcome(best, EditingSet(_reconstruct(g, opt, sigma), sigma))


# -- optimal-set enumeration and rule safety ----------------------------


def enumerate_optimal_deletion_sets(
    g: WeightedGraph, cap: int = 9
) -> list[EditingSet]:
    """All deletion sets of cost exactly opt(g) whose application is P4-free.

    Every P4-free deletion superset must hit each induced P4 on one of its
    three edges, so depth-first branching over P4 edges with budget opt(g)
    visits every optimal set.  Exponential; refuses above the cap.
    """
    if g.n > cap:
        raise SizeCapExceeded(f"n={g.n} exceeds enumeration cap {cap}")
    opt = brute_solve(g).cost
    assert opt != INF
    found: set[frozenset[tuple[int, int]]] = set()
    seen: set[frozenset[tuple[int, int]]] = set()

    def dfs(h: WeightedGraph, deleted: frozenset[tuple[int, int]], cost: int):
        if deleted in seen:
            return
        seen.add(deleted)
        witness = find_p4(h)
        if witness is None:
            found.add(deleted)
            return
        for u, v in witness.edges():
            nc = cost + g.pair_cost(u, v)
            if nc <= opt:
                step = deletion_set([(u, v)])
                dfs(apply(h, step), deleted | step.pairs, nc)

    dfs(g, frozenset(), 0)
    return [deletion_set(p) for p in sorted(found, key=sorted)]


def verify_safe(
    g: WeightedGraph,
    sets: Sequence[EditingSet],
    cap: int = 9,
    method: str = "completion",
) -> bool:
    """Is some set of the collection contained in an optimal deletion set?

    The default route uses the completion identity: a deletion set D is
    contained in an optimal solution of g if and only if
    cost(D) + opt(g without D) == opt(g).  The "enumerate" route checks
    the definition literally against every optimal set; both routes agree
    and the tests cross-check them on small graphs.
    """
    if g.n > cap:
        raise SizeCapExceeded(f"n={g.n} exceeds safety-check cap {cap}")
    for es in sets:
        if not es.pairs:
            raise InputError("safety check requires nonempty editing sets")
        if es.sigma != "deletion":
            raise InputError("safety check supports deletion sets only")
    if method == "enumerate":
        optimal = enumerate_optimal_deletion_sets(g, cap)
        return any(es.pairs <= o.pairs for o in optimal for es in sets)
    if method != "completion":
        raise InputError(f"unknown method {method!r}")
    opt = brute_solve(g).cost
    for es in sets:
        c = es.cost(g)
        if c > opt:
            continue
        rest = brute_solve(apply(g, es)).cost
        if c + rest == opt:
            return True
    return False
