"""Tests for the recursive driver: exactness, determinism, and accounting."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cographdel import (
    INF,
    InputError,
    SolverConfig,
    WeightedGraph,
    apply,
    brute_solve,
    is_cograph,
    peel_path_components,
    select_rule,
    solve,
)
from cographdel.graphs import (
    complete_graph,
    cycle_graph,
    induced_subgraph,
    path_graph,
    random_graph,
)
from cographdel.modular import modular_decomposition
from cographdel.rules import ExactPath
from cographdel.solver import RunStats, _chain_rule, packing_lower_bound
from cographdel.witness import FAMILIES, Witness, generate_chain, generate_family

from conftest import weighted_graphs


def sorted_pairs(result):
    sol = result.outcome.solution
    return None if sol is None else sol.sorted_pairs()


def test_trivial_graphs():
    for g in (WeightedGraph(0), WeightedGraph(1), complete_graph(5), path_graph(3)):
        r = solve(g)
        assert r.outcome.cost == 0
        assert r.outcome.solution.pairs == frozenset()


def test_p4_and_budgets():
    g = path_graph(4)
    assert solve(g).outcome.cost == 1
    assert sorted_pairs(solve(g)) == [(0, 1)]
    assert solve(g, k=1).outcome.cost == 1
    r = solve(g, k=0)
    assert r.outcome.cost == INF
    assert r.outcome.solution is None


def test_weighted_p4_decision_boundary():
    g = WeightedGraph(4, [(0, 1), (1, 2), (2, 3)], [2, 2, 2, 2])
    assert solve(g, k=3).outcome.cost == INF
    assert solve(g, k=4).outcome.cost == 4


def test_heavy_endpoints_push_deletion_inward():
    w = 2**28
    g = WeightedGraph(4, [(0, 1), (1, 2), (2, 3)], [w, 1, 1, w])
    r = solve(g)
    assert r.outcome.cost == 1
    assert sorted_pairs(r) == [(1, 2)]


def test_monotone_in_budget():
    g = path_graph(8)
    costs = [solve(g, k=kk).outcome.cost for kk in range(5)]
    assert costs == [INF, INF, 2, 2, 2]


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(max_n=8, max_weight=1), st.sampled_from((4, 6)))
def test_matches_brute_force(g, threshold):
    want = brute_solve(g).cost
    r = solve(g, cfg=SolverConfig(small_threshold=threshold, budget=500))
    assert r.outcome.cost == want
    if want != INF:
        h = apply(g, r.outcome.solution)
        assert is_cograph(h)
        assert r.outcome.solution.cost(g) == want


@settings(max_examples=30, deadline=None)
@given(weighted_graphs(max_n=7, max_weight=3), st.booleans())
def test_matches_brute_force_weighted(g, peel):
    want = brute_solve(g).cost
    cfg = SolverConfig(small_threshold=4, budget=0, enable_peeling=peel)
    assert solve(g, cfg=cfg).outcome.cost == want


def test_serial_and_parallel_agree():
    rng = random.Random(11)
    for _ in range(8):
        g = random_graph(rng.randint(8, 9), 0.5, rng, max_weight=2)
        a = solve(g, cfg=SolverConfig(small_threshold=6, budget=2000))
        b = solve(g, cfg=SolverConfig(small_threshold=6, budget=2000, parallel=True))
        assert a.outcome.cost == b.outcome.cost
        assert sorted_pairs(a) == sorted_pairs(b)


def test_strict_mode_matches_default():
    rng = random.Random(5)
    for _ in range(8):
        g = random_graph(rng.randint(5, 8), 0.4, rng, max_weight=2)
        a = solve(g, cfg=SolverConfig(small_threshold=4, budget=1000))
        b = solve(g, cfg=SolverConfig(small_threshold=4, budget=1000, strict=True))
        assert a.outcome.cost == b.outcome.cost
        assert sorted_pairs(a) == sorted_pairs(b)


def test_answer_independent_of_budget_above_optimum():
    rng = random.Random(2)
    g = random_graph(8, 0.5, rng)
    base = solve(g, cfg=SolverConfig(small_threshold=6, budget=0))
    opt = base.outcome.cost
    for k in (opt, opt + 1, opt + 7):
        r = solve(g, k=k, cfg=SolverConfig(small_threshold=6, budget=0))
        assert r.outcome.cost == opt
        assert sorted_pairs(r) == sorted_pairs(base)
    assert solve(g, k=opt - 1, cfg=SolverConfig(small_threshold=6, budget=0)).outcome.cost == INF


def test_planted_families_route_through_their_rules():
    for family in FAMILIES[:-1]:
        g, _ = generate_family(family, 4)
        if g.n < 8:
            continue
        r = solve(g, cfg=SolverConfig(small_threshold=8))
        assert r.stats.witnesses_found.get(family, 0) >= 1, family
        assert any(name.startswith("fixed:") for name in r.stats.rules_fired), family
        if g.n <= 13:
            assert r.outcome.cost == brute_solve(g).cost, family


def test_long_path_resolved_by_exact_path_rule():
    cfg = SolverConfig(witness_size=3, enable_peeling=False)
    r = solve(path_graph(36), cfg=cfg)
    assert r.outcome.cost == 11
    assert r.stats.rules_fired.get("path:exact") == 1
    assert r.stats.witnesses_found.get("chain") == 1


def test_long_path_peeled_when_enabled():
    r = solve(path_graph(36), cfg=SolverConfig(witness_size=3))
    assert r.outcome.cost == 11
    assert r.stats.rules_fired == {}


def test_peel_path_components_mixed():
    p7 = path_graph(7)
    edges = list(p7.edges()) + [(7, 8), (7, 9), (8, 9)]
    g = WeightedGraph(10, edges)
    pe = peel_path_components(g, 100)
    assert pe.graph.n == 3
    assert pe.budget == 98
    assert sorted(pe.deletions) == [(0, 1), (3, 4)]
    assert pe.kept == (7, 8, 9)
    r = solve(g)
    assert r.outcome.cost == 2
    assert sorted_pairs(r) == [(0, 1), (3, 4)]


def test_peel_path_components_noop_on_cycle():
    g = cycle_graph(5)
    pe = peel_path_components(g, 9)
    assert pe.graph is g
    assert pe.budget == 9
    assert pe.deletions == frozenset()
    assert pe.kept == (0, 1, 2, 3, 4)


def test_peel_consumes_pure_path_graph():
    pe = peel_path_components(path_graph(9), 50)
    assert pe.graph.n == 0
    assert pe.budget == 48
    assert len(pe.deletions) == 2


def test_packing_lower_bound_is_a_lower_bound():
    rng = random.Random(9)
    for _ in range(20):
        g = random_graph(rng.randint(4, 9), 0.5, rng, max_weight=2)
        assert packing_lower_bound(g) <= brute_solve(g).cost


def test_select_rule_falls_back_without_budget():
    g = path_graph(8)
    stats = RunStats()
    rule = select_rule(g, SolverConfig(budget=0), stats)
    assert rule.name == "p4-trivial"
    assert rule.claimed == (1, 1, 1)
    assert stats.fallbacks_taken == 1
    assert stats.witnesses_found == {}


def test_select_rule_rejects_p4_free_graph():
    with pytest.raises(InputError):
        select_rule(complete_graph(5), SolverConfig(budget=0))


def chain_witness(code):
    g, ch = generate_chain(code)
    emb = {f"v{i + 1}": v for i, v in enumerate(ch.vertices)}
    return g, Witness("chain", len(code) // 12, emb, code=code)


def test_chain_rule_zero_arm():
    g, wit = chain_witness("0" * 36)
    rule = _chain_rule(g, wit, SolverConfig())
    assert rule.name == "zero-chain"
    assert rule.claimed == (6, 1, 3, 5, 7, 9, 11, 6, 2, 4, 6, 8, 10)


def test_chain_rule_easy_arm():
    g, wit = chain_witness("1" * 33 + "011")
    rule = _chain_rule(g, wit, SolverConfig())
    assert rule.name == "easy-chain:011"
    assert rule.claimed == (1, 1, 5)


def test_chain_rule_path_arm():
    g, wit = chain_witness("1" * 36)
    rule = _chain_rule(g, wit, SolverConfig())
    assert isinstance(rule, ExactPath)
    assert rule.cost == 11


def test_config_validation():
    with pytest.raises(InputError):
        SolverConfig(small_threshold=3)
    with pytest.raises(InputError):
        SolverConfig(witness_size=2)
    with pytest.raises(InputError):
        SolverConfig(epsilon=0.0)
    with pytest.raises(InputError):
        SolverConfig(budget=-1)


def test_stats_shape():
    r = solve(path_graph(12), cfg=SolverConfig(enable_peeling=False, budget=0))
    d = r.stats.as_dict()
    assert d["recursion_nodes"] >= 1
    assert d["recursion_leaves"] >= 1
    assert d["recursion_leaves"] <= d["recursion_nodes"]
    assert set(d) == {
        "recursion_nodes",
        "recursion_leaves",
        "witnesses_found",
        "fallbacks_taken",
        "max_depth",
        "rules_fired",
        "worst_factor",
        "worst_rule",
        "root_budget",
    }
    assert 3 <= d["root_budget"] <= 11


def test_decomposition_identity_on_composed_graphs():
    rng = random.Random(4)
    for trial in range(10):
        a = random_graph(rng.randint(2, 5), 0.5, rng, max_weight=2)
        b = random_graph(rng.randint(2, 5), 0.5, rng, max_weight=2)
        edges = list(a.edges())
        shift = a.n
        edges += [(u + shift, v + shift) for u, v in b.edges()]
        if trial % 2:
            edges += [(u, v + shift) for u in range(a.n) for v in range(b.n)]
        g = WeightedGraph(a.n + b.n, edges, list(a.weights) + list(b.weights))
        dec = modular_decomposition(g)
        cfg = SolverConfig(small_threshold=4, budget=0)
        whole = solve(g, cfg=cfg).outcome.cost
        parts = solve(dec.quotient, cfg=cfg).outcome.cost
        for block in dec.partition.blocks:
            parts += solve(induced_subgraph(g, block), cfg=cfg).outcome.cost
        assert whole == parts
