"""Exact solver for minimum-cost cograph edge deletion on weighted graphs."""

from .editing import EditingSet, SolveOutcome, apply, brute_solve, deletion_set
from .graphs import (
    INF,
    CostOverflow,
    InputError,
    P4Witness,
    WeightedGraph,
    complement,
    find_p4,
    induced_subgraph,
    is_cograph,
)
from .solver import (
    RunStats,
    SolveResult,
    SolverConfig,
    peel_path_components,
    select_rule,
    solve,
)

__all__ = [
    "INF",
    "CostOverflow",
    "EditingSet",
    "InputError",
    "P4Witness",
    "RunStats",
    "SolveOutcome",
    "SolveResult",
    "SolverConfig",
    "WeightedGraph",
    "apply",
    "brute_solve",
    "complement",
    "deletion_set",
    "find_p4",
    "induced_subgraph",
    "is_cograph",
    "peel_path_components",
    "select_rule",
    "solve",
]

__version__ = "0.1.0"
