from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings

from cographdel.editing import EditingSet, brute_solve, deletion_set
from cographdel.graphs import (
    InputError,
    WeightedGraph,
    complete_graph,
    cycle_graph,
    empty_graph,
    induced_subgraph,
    is_co_connected,
    is_connected,
    path_graph,
)
from cographdel.modular import (
    extend,
    is_module,
    is_prime,
    modular_decomposition,
)

from conftest import weighted_graphs


def _is_module_naive(g: WeightedGraph, s: set[int]) -> bool:
    outside = set(range(g.n)) - s
    views = {frozenset(u for u in outside if g.has_edge(v, u)) for v in s}
    return len(views) == 1


def _all_modules(g: WeightedGraph) -> list[frozenset[int]]:
    out = []
    for r in range(1, g.n + 1):
        for combo in combinations(range(g.n), r):
            if _is_module_naive(g, set(combo)):
                out.append(frozenset(combo))
    return out


def test_is_module_examples():
    c4 = cycle_graph(4)
    assert is_module(c4, {0, 2})
    assert is_module(c4, range(4))
    assert is_module(c4, {1})
    assert not is_module(c4, {0, 1})
    with pytest.raises(InputError):
        is_module(c4, set())


def test_is_prime_examples():
    assert is_prime(path_graph(4))
    assert is_prime(empty_graph(2))
    assert not is_prime(empty_graph(3))
    assert not is_prime(cycle_graph(4))
    assert is_prime(cycle_graph(5))


def test_decomposition_examples():
    p4 = modular_decomposition(path_graph(4))
    assert p4.kind == "prime"
    assert p4.partition.blocks == ((0,), (1,), (2,), (3,))
    assert p4.quotient == path_graph(4)

    two_k2 = modular_decomposition(WeightedGraph(4, [(0, 1), (2, 3)]))
    assert two_k2.kind == "parallel"
    assert two_k2.quotient == empty_graph(2, weights=[2, 2])

    c4 = modular_decomposition(cycle_graph(4))
    assert c4.kind == "series"
    assert c4.partition.blocks == ((0, 2), (1, 3))
    assert c4.quotient == complete_graph(2, weights=[2, 2])


def test_extend_examples():
    g = WeightedGraph(5, [(i, j) for i in range(2) for j in range(2, 5)])
    dec = modular_decomposition(g)
    assert dec.kind == "series"
    assert dec.partition.blocks == ((0, 1), (2, 3, 4))
    e_q = deletion_set([(0, 1)])
    lifted = extend(g, dec.partition, e_q)
    assert len(lifted.pairs) == 6
    assert lifted.cost(g) == e_q.cost(dec.quotient) == 6
    assert extend(g, dec.partition, deletion_set([])).pairs == frozenset()
    with pytest.raises(InputError):
        extend(g, dec.partition, deletion_set([(0, 7)]))


def test_extend_on_singleton_partition_is_identity():
    g = path_graph(4)
    dec = modular_decomposition(g)
    e_q = deletion_set([(1, 2)])
    assert extend(g, dec.partition, e_q).pairs == e_q.pairs


@settings(max_examples=250, deadline=None)
@given(weighted_graphs(max_n=8, max_weight=2, min_n=1))
def test_quotient_of_connected_coconnected_graph_is_prime(g):
    if not (is_connected(g) and is_co_connected(g)):
        return
    dec = modular_decomposition(g)
    assert dec.kind == "prime"
    assert is_prime(dec.quotient)


@settings(max_examples=150, deadline=None)
@given(weighted_graphs(max_n=7, max_weight=1, min_n=1))
def test_blocks_are_strong_modules(g):
    dec = modular_decomposition(g)
    blocks = [frozenset(b) for b in dec.partition.blocks]
    covered = [v for b in blocks for v in b]
    assert sorted(covered) == list(range(g.n))
    for b in blocks:
        assert _is_module_naive(g, set(b))
    for m in _all_modules(g):
        for b in blocks:
            inter = m & b
            assert not inter or inter == m or inter == b, (m, b)


@settings(max_examples=150, deadline=None)
@given(weighted_graphs(max_n=8, max_weight=3, min_n=1))
def test_quotient_matches_representatives(g):
    dec = modular_decomposition(g)
    reps = [b[0] for b in dec.partition.blocks]
    assert dec.quotient.adj == induced_subgraph(g, reps).adj
    for i, b in enumerate(dec.partition.blocks):
        assert dec.quotient.weights[i] == sum(g.weights[v] for v in b)


@settings(max_examples=100, deadline=None)
@given(weighted_graphs(max_n=7, max_weight=2, min_n=1))
def test_extend_preserves_cost(g):
    dec = modular_decomposition(g)
    q_edges = dec.quotient.edges()
    if not q_edges:
        return
    e_q = EditingSet(frozenset(q_edges[::2]), "deletion")
    lifted = extend(g, dec.partition, e_q)
    assert lifted.cost(g) == e_q.cost(dec.quotient)


@settings(max_examples=120, deadline=None)
@given(weighted_graphs(max_n=7, max_weight=2, min_n=1))
def test_optimal_cost_splits_across_quotient_and_factors(g):
    dec = modular_decomposition(g)
    total = brute_solve(dec.quotient).cost
    for block in dec.partition.blocks:
        total += brute_solve(induced_subgraph(g, block)).cost
    assert brute_solve(g).cost == total
