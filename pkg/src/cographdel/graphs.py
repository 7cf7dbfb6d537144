"""Vertex-weighted simple graphs with bitset adjacency.

Vertices are dense integers 0..n-1.  Adjacency rows are Python ints used
as bitsets, which keeps neighborhood algebra (intersections, complements,
P4 scans) fast enough for the exact solver without pulling in a graph
library.  Graphs are immutable after construction and safe to share
across worker threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

WEIGHT_LIMIT = 2**32 - 1
COST_LIMIT = 2**63 - 1

INF = float("inf")


class InputError(ValueError):
    """Malformed graph data (bad vertex id, self-loop, weight out of range)."""


class CostOverflow(OverflowError):
    """A cost computation left the checked 64-bit range."""


def checked_cost(value: int) -> int:
    if value > COST_LIMIT:
        raise CostOverflow(f"cost {value} exceeds 64-bit limit")
    return value


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class P4Witness:
    """An induced path on four vertices, in path order."""

    path: tuple[int, int, int, int]

    def edges(self) -> list[tuple[int, int]]:
        w, x, y, z = self.path
        return [(w, x), (x, y), (y, z)]


class WeightedGraph:
    """Immutable vertex-weighted graph on vertices 0..n-1.

    Weights are positive integers bounded by WEIGHT_LIMIT; the cost of
    editing a pair uv is the product of the endpoint weights.  All cost
    arithmetic is overflow-checked against the signed 64-bit range.
    """

    __slots__ = ("n", "weights", "adj", "_edges", "_full")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        weights: Sequence[int] | None = None,
    ):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        if weights is None:
            w = (1,) * n
        else:
            w = tuple(int(x) for x in weights)
            if len(w) != n:
                raise InputError(f"expected {n} weights, got {len(w)}")
            for x in w:
                if not (1 <= x <= WEIGHT_LIMIT):
                    raise InputError(f"weight {x} out of range [1, 2^32-1]")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) references unknown vertex")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.weights = w
        self.adj = tuple(adj)
        self._full = (1 << n) - 1
        self._edges: tuple[tuple[int, int], ...] | None = None

    # -- basic queries ------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    def neighbors(self, u: int) -> list[int]:
        return list(bits(self.adj[u]))

    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edges is None:
            out = []
            for u in range(self.n):
                m = self.adj[u] >> (u + 1) << (u + 1)
                for v in bits(m):
                    out.append((u, v))
            self._edges = tuple(out)
        return self._edges

    def edge_count(self) -> int:
        return len(self.edges())

    def pair_cost(self, u: int, v: int) -> int:
        return checked_cost(self.weights[u] * self.weights[v])

    def cost_of(self, pairs: Iterable[tuple[int, int]]) -> int:
        total = 0
        for u, v in pairs:
            total = checked_cost(total + self.weights[u] * self.weights[v])
        return total

    def total_pair_cost(self) -> int:
        """Sum of pair costs over all edges (a finite upper bound on opt)."""
        return self.cost_of(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.weights == other.weights
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.n, self.weights, self.adj))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.edge_count()})"


# -- structural operations --------------------------------------------


def induced_subgraph(g: WeightedGraph, s: Iterable[int]) -> WeightedGraph:
    """Subgraph induced by vertex set s, relabeled to 0..|s|-1.

    Result vertex i corresponds to sorted(s)[i]; callers that need to map
    results back should sort s themselves and reuse that order.
    """
    order = sorted(set(s))
    for v in order:
        if not (0 <= v < g.n):
            raise InputError(f"unknown vertex id {v}")
    index = {v: i for i, v in enumerate(order)}
    edges = [
        (index[u], index[v])
        for u, v in g.edges()
        if u in index and v in index
    ]
    return WeightedGraph(len(order), edges, [g.weights[v] for v in order])


def complement(g: WeightedGraph) -> WeightedGraph:
    edges = []
    for u in range(g.n):
        nonadj = ~g.adj[u] & g._full & ~(1 << u)
        m = nonadj >> (u + 1) << (u + 1)
        for v in bits(m):
            edges.append((u, v))
    return WeightedGraph(g.n, edges, g.weights)


def find_p4(g: WeightedGraph) -> P4Witness | None:
    """Find an induced P4, or None if g is a cograph.

    Scans each edge xy as the candidate middle edge: w must see x but not
    y, z must see y but not x, and wz must be a non-edge.
    """
    adj = g.adj
    for x, y in g.edges():
        a = adj[x] & ~adj[y] & ~(1 << y)
        if not a:
            continue
        b = adj[y] & ~adj[x] & ~(1 << x)
        if not b:
            continue
        for w in bits(a):
            zmask = b & ~adj[w]
            if zmask:
                z = (zmask & -zmask).bit_length() - 1
                return P4Witness((w, x, y, z))
    return None


def is_cograph(g: WeightedGraph) -> bool:
    return find_p4(g) is None


def _components_from_rows(n: int, row) -> list[list[int]]:
    seen = 0
    full = (1 << n) - 1
    comps = []
    while seen != full:
        start = (~seen & full) & -(~seen & full)
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= row(v)
            frontier = nxt & ~comp
            comp |= frontier
        comps.append(list(bits(comp)))
        seen |= comp
    return comps


def connected_components(g: WeightedGraph) -> list[list[int]]:
    return _components_from_rows(g.n, lambda v: g.adj[v])


def co_connected_components(g: WeightedGraph) -> list[list[int]]:
    full = g._full
    return _components_from_rows(g.n, lambda v: ~g.adj[v] & full & ~(1 << v))


def is_connected(g: WeightedGraph) -> bool:
    if g.n == 0:
        return True
    return len(connected_components(g)) == 1


def is_co_connected(g: WeightedGraph) -> bool:
    if g.n == 0:
        return True
    return len(co_connected_components(g)) == 1


# -- constructions ----------------------------------------------------


def path_graph(n: int, weights: Sequence[int] | None = None) -> WeightedGraph:
    return WeightedGraph(n, [(i, i + 1) for i in range(n - 1)], weights)


def cycle_graph(n: int, weights: Sequence[int] | None = None) -> WeightedGraph:
    edges = [(i, (i + 1) % n) for i in range(n)] if n >= 3 else []
    return WeightedGraph(n, edges, weights)


def complete_graph(n: int, weights: Sequence[int] | None = None) -> WeightedGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return WeightedGraph(n, edges, weights)


def empty_graph(n: int, weights: Sequence[int] | None = None) -> WeightedGraph:
    return WeightedGraph(n, [], weights)


def random_graph(
    n: int,
    p: float,
    rng: random.Random,
    max_weight: int = 1,
) -> WeightedGraph:
    """Erdos-Renyi G(n, p) with weights drawn uniformly from 1..max_weight."""
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    weights = [rng.randint(1, max_weight) for _ in range(n)] if max_weight > 1 else None
    return WeightedGraph(n, edges, weights)
