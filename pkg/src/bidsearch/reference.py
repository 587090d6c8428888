"""Ground-truth solver with unrestricted landscape access.

This module bypasses the query oracle entirely: it exists to be the
independent source of truth that the query-efficient algorithms are tested
against.  It sorts every (platform, bid) marginal cost, sweeps the
threshold family for the largest feasible member, and then extends that
integral strategy greedily, one cheapest unit increment at a time, until a
constraint is exactly tight.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass

from .landscape import (
    FEASIBILITY_TOL,
    BidVector,
    Instance,
    evaluate,
    within_constraints,
)


class Binding(enum.Enum):
    """Which constraint is tight at a solution (if any)."""

    ROS = "ros"
    BUDGET = "budget"
    NONE = "none"


@dataclass(frozen=True)
class MarginalItem:
    """One candidate marginal cost: platform index, bid, and its value."""

    platform: int
    bid: int
    mc: float


@dataclass(frozen=True)
class ReferenceSolution:
    optimum: BidVector
    almost_optimal: BidVector
    k_star: float
    value: float
    cost: float
    binding: Binding


def classify_binding(instance: Instance, strategy: BidVector, tol: float = FEASIBILITY_TOL) -> Binding:
    """Post-hoc binding classification shared by every solver's report.

    When both constraints are tight the active one is whichever side
    realizes min(budget, target * value); ties go to ROS.
    """
    value, cost = evaluate(instance, strategy)
    ros_bound = instance.target_ros * value
    ros_tight = abs(cost - ros_bound) <= tol
    budget_tight = abs(cost - instance.budget) <= tol
    if ros_tight and budget_tight:
        return Binding.BUDGET if instance.budget < ros_bound else Binding.ROS
    if ros_tight:
        return Binding.ROS
    if budget_tight:
        return Binding.BUDGET
    return Binding.NONE


def sorted_marginals(instance: Instance) -> list[MarginalItem]:
    """All m*n candidate marginals, ascending; ties by platform then bid."""
    items = [
        MarginalItem(j, bid + 1, mc)
        for j, plat in enumerate(instance.platforms)
        for bid, mc in enumerate(plat.marginal_costs)
    ]
    items.sort(key=lambda it: (it.mc, it.platform, it.bid))
    return items


def threshold_strategy(instance: Instance, threshold: float) -> BidVector:
    """Per platform, the largest integer bid whose marginal cost is <= threshold.

    A platform whose cheapest marginal already exceeds the threshold sits
    at 0 (non-participation).
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative (got {threshold})")
    bids = [
        float(bisect.bisect_right(plat.marginal_costs, threshold))
        for plat in instance.platforms
    ]
    return BidVector(tuple(bids))


def feasibility_threshold_scan(instance: Instance) -> list[tuple[float, bool]]:
    """Feasibility of the threshold strategy at every candidate marginal.

    The scan is monotone: a prefix of feasible entries followed by
    infeasible ones.
    """
    from .landscape import feasible

    return [
        (item.mc, feasible(instance, threshold_strategy(instance, item.mc)))
        for item in sorted_marginals(instance)
    ]


def _next_increment(instance: Instance, bids: list[float]) -> tuple[int, float] | None:
    """Cheapest available unit increment: (platform, marginal cost)."""
    n = instance.num_bids
    best: tuple[float, int] | None = None
    for j, plat in enumerate(instance.platforms):
        b = int(bids[j])
        if b < n:
            mc = plat.marginal_costs[b]
            if best is None or (mc, j) < best:
                best = (mc, j)
    if best is None:
        return None
    return best[1], best[0]


def _waterfill(instance: Instance, start: BidVector) -> BidVector:
    """Greedy fractional extension of an integral strategy.

    Applies unit increments in ascending marginal-cost order (ties by
    platform index) while both constraints hold; the first increment that
    would overshoot is applied fractionally so that
    cost = min(budget, target * value) exactly.
    """
    budget, target = instance.budget, instance.target_ros
    bids = [float(b) for b in start]
    value, cost = evaluate(instance, start)
    while True:
        nxt = _next_increment(instance, bids)
        if nxt is None:
            break
        j, _ = nxt
        plat = instance.platforms[j]
        b = int(bids[j])
        v_lo = 0.0 if b == 0 else plat.values[b - 1]
        c_lo = 0.0 if b == 0 else plat.costs[b - 1]
        dv = plat.values[b] - v_lo
        dc = plat.costs[b] - c_lo
        if within_constraints(value + dv, cost + dc, budget, target):
            bids[j] = float(b + 1)
            value += dv
            cost += dc
            continue
        # Fractional stop: smallest x in [0, 1) at which a constraint is tight.
        ros_denom = dc - target * dv
        x_ros = (target * value - cost) / ros_denom if ros_denom > 0 else math.inf
        x_budget = (budget - cost) / dc
        x = max(0.0, min(x_ros, x_budget))
        bids[j] = b + x
        break
    return BidVector(tuple(bids))


def solve_reference(instance: Instance) -> ReferenceSolution:
    """Exact fractional optimum plus the almost-optimal integral strategy.

    The critical threshold is the largest candidate marginal whose
    threshold strategy is feasible (0 when even the cheapest candidate is
    infeasible, in which case the integral strategy is the zero vector).
    """
    from .landscape import feasible

    m = instance.num_platforms
    k_star = 0.0
    mu_star = BidVector.zeros(m)
    for item in sorted_marginals(instance):
        candidate = threshold_strategy(instance, item.mc)
        if feasible(instance, candidate):
            k_star = item.mc
            mu_star = candidate
    optimum = _waterfill(instance, mu_star)
    value, cost = evaluate(instance, optimum)
    return ReferenceSolution(
        optimum=optimum,
        almost_optimal=mu_star,
        k_star=k_star,
        value=value,
        cost=cost,
        binding=classify_binding(instance, optimum),
    )
