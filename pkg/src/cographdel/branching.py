"""Branching vectors: factors, domination, and epsilon calibration.

A branching rule that reduces the budget by c_1..c_r across its branches
has recursion-tree growth governed by the largest real root of
x^K = sum x^(K - c_i).  Rules with multiplicity-heavy vectors (2^c equal
branches) are handled in counted form, never by materializing branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import InputError

TOL = 1e-9


class CalibrationError(RuntimeError):
    """Calibration search exhausted its cap without certifying the target."""


@dataclass(frozen=True)
class EpsilonCalibration:
    epsilon: float
    chosen_c: int
    certified_factor: float

    def __post_init__(self):
        assert self.certified_factor <= 2 + self.epsilon


def _validate_counted(pairs: Sequence[tuple[int, int]]):
    if not pairs:
        raise InputError("branching vector must be nonempty")
    for cost, count in pairs:
        if cost < 1:
            raise InputError(f"branch cost {cost} must be >= 1")
        if count < 1:
            raise InputError(f"branch count {count} must be >= 1")


def branching_factor_counted(pairs: Sequence[tuple[int, int]]) -> float:
    """Largest real root for a vector given as (cost, multiplicity) pairs."""
    _validate_counted(pairs)
    log_counts = [(cost, math.log(count)) for cost, count in pairs]

    def g(x: float) -> float:
        # sum count * x^(-cost), evaluated in log space for stability
        lx = math.log(x)
        return math.fsum(math.exp(lc - cost * lx) for cost, lc in log_counts) - 1.0

    lo = 1.0
    if g(lo) <= 0:
        return 1.0  # single unit branch: x^c = x^(c-cost) only at 1
    hi = float(sum(count for _, count in pairs) + 1)
    while hi - lo > TOL:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    root = (lo + hi) / 2
    # snap to an exact integer root when the polynomial identity holds exactly
    nearest = round(root)
    if nearest >= 1 and abs(root - nearest) < 1e-6:
        kmax = max(cost for cost, _ in pairs)
        if sum(count * nearest ** (kmax - cost) for cost, count in pairs) == nearest**kmax:
            return float(nearest)
    return root


def branching_factor(entries: Iterable[int]) -> float:
    """Largest real root of x^K - sum x^(K - c_i) for a flat vector."""
    counts: dict[int, int] = {}
    for c in entries:
        counts[c] = counts.get(c, 0) + 1
    return branching_factor_counted(sorted(counts.items()))


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff claiming vector a is sound for a rule whose true vector is b.

    Formally: an injection from b's branches into a's with a_i <= b_j on
    matched pairs.  Sorting both and matching ascending is exchange-optimal:
    if any injection exists, the greedy one succeeds.
    """
    a_sorted = sorted(a)
    b_sorted = sorted(b)
    if len(b_sorted) > len(a_sorted):
        return False
    for i, bj in enumerate(b_sorted):
        if a_sorted[i] > bj:
            return False
    return True


# -- epsilon calibration ------------------------------------------------


def _exponential_family_factor(d: int) -> float:
    """Root > 2 of a^d - 2a^(d-1) - 2^d, i.e. factor of (1,1) + (d)^(2^d).

    Compared in log space: a^(d-1)(a-2) vs 2^d, monotone in a past 2.
    """
    ln2 = math.log(2)

    def above(a: float) -> bool:
        return (d - 1) * math.log(a) + math.log(a - 2.0) > d * ln2

    lo, hi = 2.0, 4.0
    while hi - lo > TOL:
        mid = (lo + hi) / 2
        if above(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def _staircase_factor(length: int, alpha: float, beta: float, gamma: int) -> float | None:
    extra = math.ceil(alpha * length + beta)
    if extra < 1:
        return None
    pairs = [(i, 1) for i in range(1, length + 1)]
    pairs.append((extra, gamma))
    return branching_factor_counted(pairs)


def calibrate_c(
    epsilon: float,
    family: str = "two-plus-exponential",
    alpha: float = 0.5,
    beta: float = 0.0,
    gamma: int = 2,
    cap: int = 4096,
) -> EpsilonCalibration:
    """Smallest family parameter whose branching factor is at most 2 + epsilon.

    Families: "two-plus-exponential" is (1,1) + (d)^(2^d) evaluated through
    its reduced polynomial; "staircase" is (1,2,...,L) + (ceil(alpha*L+beta))^gamma.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    target = 2.0 + epsilon
    if family == "two-plus-exponential":
        for d in range(2, cap + 1):
            factor = _exponential_family_factor(d)
            if factor <= target:
                return EpsilonCalibration(epsilon, d, factor)
        raise CalibrationError(
            f"no d <= {cap} reaches factor <= {target:.6g} "
            f"(factor at cap: {_exponential_family_factor(cap):.6g})"
        )
    if family == "staircase":
        if not (0 < alpha < 1):
            raise InputError("staircase requires 0 < alpha < 1")
        best = None
        for length in range(1, cap + 1):
            factor = _staircase_factor(length, alpha, beta, gamma)
            if factor is None:
                continue
            best = factor
            if factor <= target:
                return EpsilonCalibration(epsilon, length, factor)
        raise CalibrationError(
            f"no staircase length <= {cap} reaches factor <= {target:.6g} "
            f"(last factor: {best})"
        )
    raise InputError(f"unknown calibration family {family!r}")
