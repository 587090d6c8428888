"""Query-efficient exact search for the optimal fractional strategy.

Everything here touches the instance only through a counting oracle.  The
driver searches the space of candidate marginal costs: each round it
queries the midpoint bid of every platform's remaining range, picks the
median marginal that most evenly splits the remaining search mass, resolves
the corresponding threshold strategy by per-platform binary search, and
classifies it.  The verdict discards a constant fraction of the candidate
marginals; an almost-optimal verdict ends the search, and fractional
rounding turns it into the exact optimum.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from .landscape import BidVector, within_constraints
from .oracle import CountingOracle

#: Set BIDSEARCH_CHECK_CONTRACTS=1 to re-verify round_up's precondition with
#: extra (memoized, so distinct-count-neutral) queries.
_CHECK_CONTRACTS = os.environ.get("BIDSEARCH_CHECK_CONTRACTS", "") not in ("", "0")


class Verdict(enum.Enum):
    """Classification of an integral strategy by :func:`opt_check`."""

    INFEASIBLE = "infeasible"
    NOT_THRESHOLD = "not-threshold"
    NOT_OPTIMAL = "not-optimal"
    ALMOST_OPTIMAL = "almost-optimal"


@dataclass
class SearchRanges:
    """Inclusive per-platform bid ranges; lo > hi marks an exhausted platform."""

    lo: list[int]
    hi: list[int]

    @classmethod
    def full(cls, m: int, n: int) -> "SearchRanges":
        return cls([1] * m, [n] * m)

    def active(self) -> list[int]:
        return [j for j in range(len(self.lo)) if self.lo[j] <= self.hi[j]]

    def width(self, j: int) -> int:
        return self.hi[j] - self.lo[j]


def _as_integral_bids(oracle: CountingOracle, strategy: Sequence[float]) -> list[int]:
    n = oracle.num_bids
    bids = []
    for j, b in enumerate(strategy):
        if not float(b).is_integer():
            raise ValueError(f"strategy must be integral (platform {j} has bid {b})")
        b = int(b)
        if not 0 <= b <= n:
            raise ValueError(f"bid {b} on platform {j} outside 0..{n}")
        bids.append(b)
    if len(bids) != oracle.num_platforms:
        raise ValueError(
            f"strategy length {len(bids)} does not match platform count {oracle.num_platforms}"
        )
    return bids


def match_marginal_cost(
    oracle: CountingOracle, ranges: SearchRanges, threshold: float
) -> BidVector:
    """Largest in-range bid with marginal cost <= threshold, per platform.

    Probes each range's left edge first: when even that edge exceeds the
    threshold the result is one below the range (0 at the bottom), so the
    answer is always the true threshold strategy restricted to the range.
    Uses ceiling midpoints; at most ceil(log2(width + 1)) + 1 probes per
    platform.
    """
    out = []
    for j in range(oracle.num_platforms):
        lo, hi = ranges.lo[j], ranges.hi[j]
        if lo > hi:
            raise ValueError(f"empty search range on platform {j}: [{lo}, {hi}]")
        if oracle.query(j, lo).marginal_cost > threshold:
            out.append(float(lo - 1))
            continue
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if oracle.query(j, mid).marginal_cost <= threshold:
                lo = mid
            else:
                hi = mid - 1
        out.append(float(lo))
    return BidVector(tuple(out))


def opt_check(oracle: CountingOracle, strategy: BidVector | Sequence[float]) -> Verdict:
    """Classify an integral strategy with at most 2m distinct queries.

    Infeasible strategies are reported immediately.  Otherwise the largest
    queried marginal is taken as the strategy's implied threshold; if some
    other platform could still be raised within that threshold the input is
    not a threshold strategy at all.  Otherwise the single cheapest raise is
    tried: if it breaks feasibility (or no raise exists) the input is the
    almost-optimal strategy, else it is merely not optimal.
    """
    bids = _as_integral_bids(oracle, strategy)
    m, n = oracle.num_platforms, oracle.num_bids
    answers = [oracle.query(j, bids[j]) for j in range(m)]
    total_value = sum(a.value for a in answers)
    total_cost = sum(a.cost for a in answers)
    if not within_constraints(total_value, total_cost, oracle.budget, oracle.target_ros):
        return Verdict.INFEASIBLE
    implied_k = 0.0
    j_top = -1
    for j in range(m):
        if bids[j] >= 1 and (j_top < 0 or answers[j].marginal_cost > implied_k):
            implied_k = answers[j].marginal_cost
            j_top = j
    nxt = [oracle.query(j, bids[j] + 1) for j in range(m)]
    for j in range(m):
        if j != j_top and nxt[j].marginal_cost <= implied_k:
            return Verdict.NOT_THRESHOLD
    j_min = 0
    for j in range(1, m):
        if nxt[j].marginal_cost < nxt[j_min].marginal_cost:
            j_min = j
    if math.isinf(nxt[j_min].marginal_cost):
        return Verdict.ALMOST_OPTIMAL  # every platform already at the top bid
    raised_value = total_value - answers[j_min].value + nxt[j_min].value
    raised_cost = total_cost - answers[j_min].cost + nxt[j_min].cost
    if not within_constraints(raised_value, raised_cost, oracle.budget, oracle.target_ros):
        return Verdict.ALMOST_OPTIMAL
    return Verdict.NOT_OPTIMAL


def round_up(oracle: CountingOracle, almost_optimal: BidVector | Sequence[float]) -> BidVector:
    """Fractional extension of the almost-optimal integral strategy.

    Walks the available unit increments in ascending marginal-cost order
    (ties by platform index), applying each in full while both constraints
    hold; the first overshooting increment is applied fractionally so that
    cost = min(budget, target * value).  All platforms at the top bid means
    nothing to extend.  Adds at most m distinct queries, none when
    opt_check already probed the same keys on this oracle.

    The input must be almost-optimal (opt_check verdict ALMOST_OPTIMAL);
    otherwise the result is unspecified.
    """
    bids = _as_integral_bids(oracle, almost_optimal)
    if _CHECK_CONTRACTS:
        verdict = opt_check(oracle, almost_optimal)
        assert verdict is Verdict.ALMOST_OPTIMAL, (
            f"round_up precondition violated: opt_check said {verdict}"
        )
    m, n = oracle.num_platforms, oracle.num_bids
    budget, target = oracle.budget, oracle.target_ros
    base = [oracle.query(j, bids[j]) for j in range(m)]
    nxt = [oracle.query(j, bids[j] + 1) for j in range(m)]
    value = sum(a.value for a in base)
    cost = sum(a.cost for a in base)
    result = [float(b) for b in bids]
    increments = sorted(
        (nxt[j].marginal_cost, j) for j in range(m) if bids[j] < n
    )
    for _, j in increments:
        dv = nxt[j].value - base[j].value
        dc = nxt[j].cost - base[j].cost
        if within_constraints(value + dv, cost + dc, budget, target):
            result[j] += 1.0
            value += dv
            cost += dc
            continue
        ros_denom = dc - target * dv
        x_ros = (target * value - cost) / ros_denom if ros_denom > 0 else math.inf
        x_budget = (budget - cost) / dc
        x = max(0.0, min(x_ros, x_budget))
        result[j] += x
        break
    return BidVector(tuple(result))


def _warn_if_not_strict(oracle: CountingOracle, algorithm: str) -> None:
    # Metadata peek only; the optimality guarantee needs strictly
    # increasing marginals per platform and no exact marginal collisions
    # across platforms (a collision at the critical threshold makes the
    # threshold family skip the optimum's floor).
    instance = oracle.instance
    if not instance.strict_marginals:
        warnings.warn(
            f"{algorithm}: instance has non-strict marginal costs; "
            "the exact-optimality guarantee does not apply",
            RuntimeWarning,
            stacklevel=3,
        )
        return
    all_mcs = [mc for plat in instance.platforms for mc in plat.marginal_costs]
    if len(set(all_mcs)) < len(all_mcs):
        warnings.warn(
            f"{algorithm}: marginal costs collide across platforms; the "
            "exact-optimality guarantee does not apply if a collision sits "
            "at the critical threshold",
            RuntimeWarning,
            stacklevel=3,
        )


def _pivot_position(widths: list[int]) -> int:
    """Ranked position whose prefix/suffix search mass is most balanced."""
    total = sum(widths)
    best_pos, best_score = 0, None
    prefix = 0
    for pos, w in enumerate(widths):
        prefix += w
        score = abs(prefix - (total - prefix + w))
        if best_score is None or score < best_score:
            best_pos, best_score = pos, score
    return best_pos


def median_of_medians(
    oracle: CountingOracle,
    inspect: Callable[..., None] | None = None,
) -> BidVector:
    """Exact fractional optimum through counted queries only.

    ``inspect``, if given, is called once per round before the cut with
    (lo, hi, medians, threshold, verdict); it exists for invariant checks
    in tests.
    """
    _warn_if_not_strict(oracle, "median_of_medians")
    m, n = oracle.num_platforms, oracle.num_bids
    ranges = SearchRanges.full(m, n)
    full = SearchRanges.full(m, n)
    while True:
        active = ranges.active()
        if not active:
            # No feasible candidate marginal exists; extend from zero.
            return round_up(oracle, BidVector.zeros(m))
        medians = {j: (ranges.lo[j] + ranges.hi[j]) // 2 for j in active}
        mcs = {j: oracle.query(j, medians[j]).marginal_cost for j in active}
        ranked = sorted(active, key=lambda j: (mcs[j], j))
        pivot_pos = _pivot_position([ranges.width(j) for j in ranked])
        threshold = mcs[ranked[pivot_pos]]
        candidate = match_marginal_cost(oracle, full, threshold)
        verdict = opt_check(oracle, candidate)
        if inspect is not None:
            inspect(list(ranges.lo), list(ranges.hi), dict(medians), threshold, verdict)
        if verdict is Verdict.ALMOST_OPTIMAL:
            return round_up(oracle, candidate)
        if verdict is Verdict.INFEASIBLE:
            for pos in range(pivot_pos, len(ranked)):
                j = ranked[pos]
                ranges.hi[j] = medians[j] - 1
        elif verdict is Verdict.NOT_OPTIMAL:
            for pos in range(pivot_pos + 1):
                j = ranked[pos]
                ranges.lo[j] = medians[j] + 1
        else:
            raise RuntimeError(
                "internal invariant violated: a freshly matched threshold strategy "
                f"was classified {verdict}"
            )
