"""Recursive exact solver for minimum-cost cograph edge deletion.

The driver decomposes the graph into its maximal strong modules, solves
small pieces by the exhaustive solver, and branches on large prime
quotients using the rule menus from the rules module.  Each branch lifts
a quotient-level deletion set to the host graph, recurses with the
budget reduced by the actual deletion cost, and the minimum over
branches is exact because every menu is safe: some optimal solution
contains one entry in full.

Budgets are weighted costs.  A call answers the exact optimum whenever
it is at most the budget and reports infeasibility otherwise, so the
top-level optimization entry point simply starts from the total edge
cost.  Pruning (a greedy upper bound, branch capping, and tightening
factor budgets by costs already committed) never changes the answer:
equal-cost candidates are always explored, and ties are broken toward
the lexicographically smallest deletion set, which makes serial and
parallel runs return identical solutions.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .branching import CalibrationError, branching_factor, calibrate_c
from .editing import EditingSet, SolveOutcome, apply, brute_solve, deletion_set
from .graphs import (
    INF,
    InputError,
    WeightedGraph,
    connected_components,
    find_p4,
    induced_subgraph,
    is_cograph,
)
from .modular import DecompositionResult, extend, modular_decomposition
from .rules import (
    ExactPath,
    RuleSet,
    path_context,
    path_dp,
    rule_easy_chain,
    rule_fixed,
    rule_p4_trivial,
    rule_path,
    rule_zero_chain,
)
from .witness import (
    DEFAULT_NODE_BUDGET,
    ChainDescriptor,
    Witness,
    find_forced_subchain,
    find_witness,
)

_FACTOR_TOL = 1e-9

_factor_of = lru_cache(maxsize=None)(branching_factor)

# These two menus are safe on any graph with a P4 and carry no size
# parameter, so the branching-factor target does not apply to them.
_FALLBACK_VECTORS = ((1, 1, 1), (1, 2, 2, 2))


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the recursive driver.

    small_threshold: below this vertex count the exhaustive solver runs.
    witness_size: size parameter of the structures the branching hunts for.
    epsilon: slack over factor 2 that emitted menus should respect once
        witness_size is large enough to certify it.
    budget: node budget per witness search; searches are best-effort and
        a miss only degrades the branching, never correctness.
    strict: disable the pruning shortcuts (greedy bound, branch capping,
        committed-cost tightening) and mirror the plain recursion.
    """

    small_threshold: int = 12
    witness_size: int = 4
    epsilon: float = 0.5
    budget: int = DEFAULT_NODE_BUDGET
    enable_peeling: bool = True
    parallel: bool = False
    strict: bool = False

    def __post_init__(self):
        if self.small_threshold < 4:
            raise InputError("small_threshold must be at least 4")
        if self.witness_size < 3:
            raise InputError("witness_size must be at least 3")
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")
        if self.budget < 0:
            raise InputError("budget must be nonnegative")


@dataclass
class RunStats:
    """Counters describing one solver run."""

    recursion_nodes: int = 0
    recursion_leaves: int = 0
    witnesses_found: dict[str, int] = field(default_factory=dict)
    fallbacks_taken: int = 0
    max_depth: int = 0
    rules_fired: dict[str, int] = field(default_factory=dict)
    worst_factor: float = 1.0
    worst_rule: str | None = None
    root_budget: int | float | None = None
    _lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    def note_node(self, depth: int) -> None:
        with self._lock:
            self.recursion_nodes += 1
            if depth > self.max_depth:
                self.max_depth = depth

    def note_leaf(self) -> None:
        with self._lock:
            self.recursion_leaves += 1

    def note_witness(self, family: str) -> None:
        with self._lock:
            self.witnesses_found[family] = self.witnesses_found.get(family, 0) + 1

    def note_fallback(self) -> None:
        with self._lock:
            self.fallbacks_taken += 1

    def note_rule(self, name: str, factor: float) -> None:
        with self._lock:
            self.rules_fired[name] = self.rules_fired.get(name, 0) + 1
            if factor > self.worst_factor or self.worst_rule is None:
                self.worst_factor = max(self.worst_factor, factor)
                self.worst_rule = name

    def as_dict(self) -> dict:
        return {
            "recursion_nodes": self.recursion_nodes,
            "recursion_leaves": self.recursion_leaves,
            "witnesses_found": dict(self.witnesses_found),
            "fallbacks_taken": self.fallbacks_taken,
            "max_depth": self.max_depth,
            "rules_fired": dict(self.rules_fired),
            "worst_factor": self.worst_factor,
            "worst_rule": self.worst_rule,
            "root_budget": self.root_budget,
        }


@dataclass(frozen=True)
class SolveResult:
    outcome: SolveOutcome
    stats: RunStats


@dataclass(frozen=True)
class PeelResult:
    """Outcome of splitting path components off a graph.

    ``kept`` maps the vertex ids of the remaining graph back to ids of the
    original one (remaining vertex i was original vertex kept[i]).
    """

    graph: WeightedGraph
    budget: int | float
    deletions: frozenset[tuple[int, int]]
    kept: tuple[int, ...]


def _is_path_members(g: WeightedGraph, comp: list[int]) -> bool:
    mask = 0
    for v in comp:
        mask |= 1 << v
    inner_degrees = 0
    for v in comp:
        d = (g.adj[v] & mask).bit_count()
        if d > 2:
            return False
        inner_degrees += d
    return inner_degrees == 2 * (len(comp) - 1)


def peel_path_components(g: WeightedGraph, k: int | float) -> PeelResult:
    """Solve and remove every connected component that is a path.

    Path components have a linear-time exact solution, so they never need
    to take part in the branching; their cost is charged to the budget
    immediately.
    """
    kept: list[int] = []
    pairs: set[tuple[int, int]] = set()
    total = 0
    for comp in connected_components(g):
        if _is_path_members(g, comp):
            if len(comp) >= 4:
                cost, dels = path_dp(induced_subgraph(g, comp))
                total += cost
                pairs.update((comp[a], comp[b]) for a, b in dels)
        else:
            kept.extend(comp)
    kept.sort()
    if len(kept) == g.n:
        return PeelResult(g, k, frozenset(), tuple(range(g.n)))
    return PeelResult(
        induced_subgraph(g, kept), k - total, frozenset(pairs), tuple(kept)
    )


@lru_cache(maxsize=None)
def _factor_check_floor(epsilon: float) -> int | None:
    """Smallest witness size at which emitted menus must meet 2 + epsilon."""
    try:
        return calibrate_c(epsilon).chosen_c
    except CalibrationError:
        return None


def _chain_rule(
    g: WeightedGraph, wit: Witness, cfg: SolverConfig
) -> RuleSet | ExactPath | None:
    """Turn a chain witness into a rule via its forced subchain."""
    code = wit.code or ""
    vertices = tuple(wit.embedding[f"v{i}"] for i in range(1, len(code) + 1))
    chain = ChainDescriptor(vertices, code)
    try:
        sub = find_forced_subchain(chain)
    except InputError:
        return None
    if "0" not in sub.code[1:]:
        # an all-ones chain is an induced path; prefer the full chain when
        # it is one too, so a path quotient is recognized and solved exactly
        path = chain if "0" not in code[1:] else sub
        ctx = path_context(g, path.vertices)
        return rule_path(g, ctx, len(path) // 3, with_peeling=cfg.enable_peeling)
    try:
        if "1" not in sub.code[1:]:
            return rule_zero_chain(g, sub)
        return rule_easy_chain(g, sub)
    except InputError:
        return None


def select_rule(
    g: WeightedGraph, cfg: SolverConfig, stats: RunStats | None = None
) -> RuleSet | ExactPath:
    """Pick a branching rule for a prime graph that still has a P4.

    Specific structures are hunted first, then chains (dispatched through
    their forced subchain), and when nothing is found within the budget
    the menu degrades to branching on the three edges of a single P4,
    which is always safe.
    """
    wit = find_witness(g, cfg.witness_size, cfg.budget, assume_prime=True)
    rule: RuleSet | ExactPath | None = None
    if wit is not None:
        if stats is not None:
            stats.note_witness(wit.family)
        if wit.family == "chain":
            rule = _chain_rule(g, wit, cfg)
        else:
            rule = rule_fixed(g, wit)
    if rule is None:
        if stats is not None:
            stats.note_fallback()
        p4 = find_p4(g)
        if p4 is None:
            raise InputError("rule selection needs a graph with a P4")
        rule = rule_p4_trivial(g, p4)
    if isinstance(rule, RuleSet) and rule.claimed not in _FALLBACK_VECTORS:
        floor = _factor_check_floor(cfg.epsilon)
        if floor is not None and cfg.witness_size >= floor:
            effective = tuple(cl + rule.peel_credit for cl in rule.claimed)
            factor = _factor_of(effective)
            assert factor <= 2 + cfg.epsilon + _FACTOR_TOL, (rule.name, factor)
    return rule


def _lift_pair(pair: tuple[int, int], order) -> tuple[int, int]:
    a, b = pair
    return (order[a], order[b])


def greedy_deletion_bound(g: WeightedGraph) -> int:
    """Cost of repeatedly deleting the cheapest edge of some induced P4.

    The result is feasible, hence an upper bound on the optimum; it seeds
    branch capping.
    """
    h = g
    total = 0
    while (wit := find_p4(h)) is not None:
        u, v = min(wit.edges(), key=lambda e: (h.pair_cost(*e), e))
        total += h.pair_cost(u, v)
        h = apply(h, deletion_set([(u, v)]))
    return total


def packing_lower_bound(g: WeightedGraph) -> int:
    """Cost lower bound from a vertex-disjoint packing of induced P4s.

    A P4 induced on four vertices stays a P4 unless one of its own three
    edges goes, so disjoint P4s each force at least their cheapest edge.
    """
    h = g
    total = 0
    while (wit := find_p4(h)) is not None:
        total += min(h.pair_cost(a, b) for a, b in wit.edges())
        used = set(wit.path)
        h = induced_subgraph(h, [v for v in range(h.n) if v not in used])
    return total


class _Runner:
    def __init__(self, cfg: SolverConfig, stats: RunStats):
        self.cfg = cfg
        self.stats = stats
        # Transposition tables.  Identical subgraphs recur whenever branches
        # delete the same edges in different orders; a finished call either
        # pins the exact optimum (independent of the budget it ran under) or
        # certifies that the optimum exceeds the budget it failed at.
        self.known: dict[WeightedGraph, tuple] = {}
        self.failed_at: dict[WeightedGraph, int] = {}

    def solve(self, g: WeightedGraph, k, depth: int, pool):
        """Exact optimum of g if it is at most k, else INF.

        Returns (cost, pairs) with pairs None exactly when the cost is INF.
        """
        cfg = self.cfg
        self.stats.note_node(depth)
        if k >= 0 and is_cograph(g):
            self.stats.note_leaf()
            return 0, frozenset()
        if k <= 0:
            self.stats.note_leaf()
            return INF, None
        if not cfg.strict:
            hit = self.known.get(g)
            if hit is not None:
                self.stats.note_leaf()
                return hit if hit[0] <= k else (INF, None)
            if self.failed_at.get(g, -1) >= k:
                self.stats.note_leaf()
                return INF, None
        val, pairs = self._dispatch(g, k, depth, pool)
        if not cfg.strict:
            if val == INF:
                if k > self.failed_at.get(g, -1):
                    self.failed_at[g] = k
            else:
                self.known[g] = (val, pairs)
        return val, pairs

    def _dispatch(self, g: WeightedGraph, k, depth: int, pool):
        cfg = self.cfg
        if not cfg.strict and packing_lower_bound(g) > k:
            self.stats.note_leaf()
            return INF, None
        if cfg.enable_peeling:
            peel = peel_path_components(g, k)
            if peel.graph.n != g.n:
                if peel.budget < 0:
                    self.stats.note_leaf()
                    return INF, None
                val, pairs = self.solve(peel.graph, peel.budget, depth, pool)
                if val == INF:
                    return INF, None
                lifted = {_lift_pair(p, peel.kept) for p in pairs}
                return (k - peel.budget) + val, peel.deletions | lifted
        if g.n < cfg.small_threshold:
            self.stats.note_leaf()
            out = brute_solve(g, k)
            if out.cost == INF:
                return INF, None
            return out.cost, out.solution.pairs
        dec = modular_decomposition(g)
        quotient = dec.quotient
        if quotient.n >= cfg.small_threshold and not is_cograph(quotient):
            rule = select_rule(quotient, cfg, self.stats)
            if isinstance(rule, ExactPath):
                self.stats.note_rule("path:exact", 1.0)
                q_sol = deletion_set(rule.deletions)
                return self._by_parts(g, dec, k, depth, pool, q_sol, rule.cost)
            effective = tuple(cl + rule.peel_credit for cl in rule.claimed)
            self.stats.note_rule(rule.name, _factor_of(effective))
            return self._branch(g, dec, k, depth, pool, rule)
        q_out = brute_solve(quotient)
        return self._by_parts(g, dec, k, depth, pool, q_out.solution, q_out.cost)

    def _branch(self, g, dec, k, depth, pool, rule: RuleSet):
        """Recurse on every menu entry lifted to g; exact by menu safety."""
        entries = sorted(
            zip(rule.claimed, range(len(rule)), rule.iter_sets()),
            key=lambda e: e[:2],
        )
        bound = INF
        best = None  # (cost, sorted-pairs key, pairs)
        launched = []
        for _, _, entry in entries:
            ext = extend(g, dec.partition, entry)
            ext_cost = ext.cost(g)
            cap = min(k, bound)
            if ext_cost > cap:
                continue
            child = apply(g, ext)
            if pool is not None:
                fut = pool.submit(self.solve, child, cap - ext_cost, depth + 1, None)
                launched.append((ext_cost, frozenset(ext.pairs), fut))
                continue
            val, pairs = self.solve(child, cap - ext_cost, depth + 1, None)
            launched.append((ext_cost, frozenset(ext.pairs), (val, pairs)))
            if not self.cfg.strict and val != INF and ext_cost + val < bound:
                bound = ext_cost + val
        for ext_cost, ext_pairs, res in launched:
            val, pairs = res.result() if hasattr(res, "result") else res
            if val == INF:
                continue
            total = ext_cost + val
            merged = ext_pairs | pairs
            key = tuple(sorted(merged))
            if best is None or (total, key) < (best[0], best[1]):
                best = (total, key, merged)
        if not launched:
            self.stats.note_leaf()
        if best is None:
            return INF, None
        return best[0], best[2]

    def _by_parts(self, g, dec, k, depth, pool, q_sol: EditingSet, q_cost):
        """Quotient solution plus factor recursion; exact by decomposition."""
        ext = extend(g, dec.partition, q_sol)
        ext_cost = ext.cost(g)
        assert ext_cost == q_cost
        if ext_cost > k:
            self.stats.note_leaf()
            return INF, None
        pairs = set(ext.pairs)
        committed = ext_cost
        recursed = False
        for block in dec.partition.blocks:
            if len(block) < 4:
                continue
            recursed = True
            budget = k if self.cfg.strict else k - committed
            sub = induced_subgraph(g, block)
            val, sub_pairs = self.solve(sub, budget, depth + 1, pool)
            if val == INF:
                return INF, None
            committed += val
            pairs.update(_lift_pair(p, block) for p in sub_pairs)
        if not recursed:
            self.stats.note_leaf()
        if committed > k:
            return INF, None
        return committed, frozenset(pairs)


def solve(
    g: WeightedGraph, k: int | float = INF, cfg: SolverConfig | None = None
) -> SolveResult:
    """Minimum-cost deletion set making g P4-free, within budget k.

    With the default infinite budget this is plain optimization; a finite
    budget turns the call into a decision query that answers INF whenever
    the optimum exceeds it.  The returned statistics describe the
    recursion tree and which rules fired.
    """
    if cfg is None:
        cfg = SolverConfig()
    stats = RunStats()
    limit = g.total_pair_cost()
    if k != INF:
        limit = min(limit, k)
    if not cfg.strict:
        # a feasible cost caps the budget without changing the answer
        limit = min(limit, greedy_deletion_bound(g))
    stats.root_budget = limit
    runner = _Runner(cfg, stats)
    if cfg.parallel:
        with ThreadPoolExecutor() as pool:
            val, pairs = runner.solve(g, limit, 0, pool)
    else:
        val, pairs = runner.solve(g, limit, 0, None)
    if val == INF:
        return SolveResult(SolveOutcome(INF, None), stats)
    solution = deletion_set(pairs)
    assert g.cost_of(solution.pairs) == val
    assert is_cograph(apply(g, solution))
    return SolveResult(SolveOutcome(val, solution), stats)
