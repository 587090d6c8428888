"""Prediction-guided search with doubling-squared windows.

An untrusted prediction of the optimal fractional strategy seeds the
search.  If its floor already classifies as almost-optimal the answer
costs only the check itself (at most 2m distinct queries).  Otherwise the
search runs the median-of-medians round restricted to per-platform windows
around the prediction, squaring the window radius whenever a window is
exhausted, so the cost scales with the prediction error instead of the
full bid range.
"""

from __future__ import annotations

import math
from typing import Sequence

from .landscape import BidVector
from .oracle import CountingOracle
from .search import (
    SearchRanges,
    Verdict,
    _pivot_position,
    _warn_if_not_strict,
    match_marginal_cost,
    opt_check,
    round_up,
)


def prediction_error(reference_opt: BidVector | Sequence[float], prediction: BidVector | Sequence[float]) -> float:
    """Worst-case per-platform deviation of a prediction (L-infinity)."""
    ref = tuple(float(b) for b in reference_opt)
    pred = tuple(float(b) for b in prediction)
    if len(ref) != len(pred):
        raise ValueError(f"length mismatch: {len(ref)} vs {len(pred)}")
    return max(abs(p - r) for p, r in zip(pred, ref))


def _window_round(
    oracle: CountingOracle,
    window_lo: list[int],
    window_hi: list[int],
) -> BidVector | None:
    """One window-restricted search round; None when every range exhausts."""
    m = oracle.num_platforms
    ranges = SearchRanges(list(window_lo), list(window_hi))
    windows = SearchRanges(list(window_lo), list(window_hi))
    while True:
        active = ranges.active()
        if not active:
            return None
        medians = {j: (ranges.lo[j] + ranges.hi[j]) // 2 for j in active}
        mcs = {j: oracle.query(j, medians[j]).marginal_cost for j in active}
        ranked = sorted(active, key=lambda j: (mcs[j], j))
        pivot_pos = _pivot_position([ranges.width(j) for j in ranked])
        threshold = mcs[ranked[pivot_pos]]

        # Left check: a window whose bottom edge is 2 or more cannot
        # represent bids below itself, so a threshold under that edge's
        # marginal is too small outright.  A bottom edge of 1 is exempt:
        # bid 0 is representable as "one below the range".
        too_small = any(
            window_lo[j] >= 2 and oracle.query(j, window_lo[j]).marginal_cost > threshold
            for j in range(m)
        )
        if too_small:
            for pos in range(pivot_pos + 1):
                j = ranked[pos]
                ranges.lo[j] = medians[j] + 1
            continue

        candidate = match_marginal_cost(oracle, windows, threshold)
        verdict = opt_check(oracle, candidate)
        if verdict is Verdict.ALMOST_OPTIMAL:
            return round_up(oracle, candidate)
        if verdict in (Verdict.INFEASIBLE, Verdict.NOT_THRESHOLD):
            # NOT_THRESHOLD means a window top truncated the strategy, so
            # the threshold (and everything above) is too large.
            for pos in range(pivot_pos, len(ranked)):
                j = ranked[pos]
                ranges.hi[j] = medians[j] - 1
        else:
            for pos in range(pivot_pos + 1):
                j = ranked[pos]
                ranges.lo[j] = medians[j] + 1


def branch_out_median_of_medians(
    oracle: CountingOracle, prediction: BidVector | Sequence[float]
) -> BidVector:
    """Optimal fractional strategy guided by an untrusted prediction."""
    _warn_if_not_strict(oracle, "branch_out_median_of_medians")
    m, n = oracle.num_platforms, oracle.num_bids
    pred = [float(b) for b in prediction]
    if len(pred) != m:
        raise ValueError(f"prediction length {len(pred)} does not match platform count {m}")
    for j, b in enumerate(pred):
        if not 0.0 <= b <= n:
            raise ValueError(f"prediction bid {b} on platform {j} outside [0, {n}]")
    anchor = [int(math.floor(b)) for b in pred]

    fast = BidVector(tuple(float(b) for b in anchor))
    if opt_check(oracle, fast) is Verdict.ALMOST_OPTIMAL:
        return round_up(oracle, fast)

    i = 0
    while True:
        radius = min(2 ** (2 ** i), n)
        window_lo = [max(1, anchor[j] - radius) for j in range(m)]
        window_hi = [min(n, anchor[j] + radius) for j in range(m)]
        result = _window_round(oracle, window_lo, window_hi)
        if result is not None:
            return result
        if all(window_lo[j] == 1 and window_hi[j] == n for j in range(m)):
            # Full coverage exhausted: no feasible candidate marginal exists.
            return round_up(oracle, BidVector.zeros(m))
        i += 1
