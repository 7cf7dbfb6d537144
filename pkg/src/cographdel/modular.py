"""Modules, modular decomposition, quotients, and editing-set extension.

Only the top-level partition into maximal strong modules is needed: the
solver recurses into the factors itself, so no decomposition tree is
built.  When the graph or its complement is disconnected the partition
is the components or co-components.  Otherwise the maximal proper
modules are pairwise disjoint and form the partition; each one is found
by growing minimal modules from vertex pairs, an O(n^4)-ish computation
that is nowhere near the bottleneck of the exponential driver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import (
    InputError,
    WeightedGraph,
    bits,
    co_connected_components,
    connected_components,
    is_co_connected,
    is_connected,
)
from .editing import EditingSet


@dataclass(frozen=True)
class ModularPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, v: int) -> int:
        for i, b in enumerate(self.blocks):
            if v in b:
                return i
        raise InputError(f"vertex {v} not covered by partition")


@dataclass(frozen=True)
class DecompositionResult:
    partition: ModularPartition
    quotient: WeightedGraph
    kind: str  # parallel | series | prime


def is_module(g: WeightedGraph, s) -> bool:
    """True iff every member of s sees the same vertices outside s."""
    mask = 0
    for v in s:
        if not (0 <= v < g.n):
            raise InputError(f"unknown vertex id {v}")
        mask |= 1 << v
    if mask == 0:
        raise InputError("the empty set is not a candidate module")
    outside = g._full & ~mask
    first = mask & -mask
    ref = g.adj[first.bit_length() - 1] & outside
    for v in bits(mask):
        if g.adj[v] & outside != ref:
            return False
    return True


def _grow_module(g: WeightedGraph, seed: int) -> int:
    """Smallest module containing the seed mask (fixpoint of adding splitters)."""
    m = seed
    while True:
        added = 0
        for z in bits(g._full & ~m):
            inter = g.adj[z] & m
            if inter != 0 and inter != m:
                added |= 1 << z
        if not added:
            return m
        m |= added


def is_prime(g: WeightedGraph) -> bool:
    """True iff all modules are trivial (singletons or the whole vertex set)."""
    if g.n <= 2:
        return True
    if not is_connected(g) or not is_co_connected(g):
        return False
    full = g._full
    for v in range(g.n):
        for w in range(v + 1, g.n):
            if _grow_module(g, (1 << v) | (1 << w)) != full:
                return False
    return True


def modular_decomposition(g: WeightedGraph) -> DecompositionResult:
    if g.n < 1:
        raise InputError("decomposition needs at least one vertex")
    if not is_connected(g):
        blocks = connected_components(g)
        kind = "parallel"
    elif not is_co_connected(g):
        blocks = co_connected_components(g)
        kind = "series"
    else:
        blocks = _maximal_proper_modules(g)
        kind = "prime"
    blocks = tuple(tuple(sorted(b)) for b in sorted(blocks, key=min))
    partition = ModularPartition(blocks)
    reps = [b[0] for b in blocks]
    weights = [sum(g.weights[v] for v in b) for b in blocks]
    edges = [
        (i, j)
        for i in range(len(reps))
        for j in range(i + 1, len(reps))
        if g.has_edge(reps[i], reps[j])
    ]
    quotient = WeightedGraph(len(blocks), edges, weights)
    return DecompositionResult(partition, quotient, kind)


def _maximal_proper_modules(g: WeightedGraph) -> list[list[int]]:
    # For connected and complement-connected graphs the maximal proper
    # modules cannot overlap, so the block of v is v plus every u whose
    # joint minimal module with v stays proper.
    full = g._full
    assigned = 0
    blocks = []
    for v in range(g.n):
        if assigned >> v & 1:
            continue
        block = 1 << v
        for u in range(g.n):
            if u != v and not (assigned >> u & 1):
                m = _grow_module(g, (1 << v) | (1 << u))
                if m != full:
                    block |= m
        blocks.append(list(bits(block)))
        assigned |= block
    return blocks


def extend(
    g: WeightedGraph, partition: ModularPartition, e_q: EditingSet
) -> EditingSet:
    """Lift quotient-level edits to the original graph (all cross pairs)."""
    nblocks = len(partition.blocks)
    pairs = []
    for i, j in e_q.pairs:
        if not (0 <= i < nblocks and 0 <= j < nblocks):
            raise InputError(f"editing pair ({i},{j}) references unknown block")
        for x in partition.blocks[i]:
            for y in partition.blocks[j]:
                pairs.append((x, y))
    return EditingSet(frozenset(pairs), e_q.sigma)
