"""Cutting-plane approximation driven by estimated centroids.

Each round estimates the centroid of the remaining search body by
hit-and-run sampling, asks a strong separation oracle whether that point
satisfies both constraints, and halves the body: through a violated
constraint's subgradient cut, or, at feasible points, through the
objective's supergradient (keeping the side positively correlated with the
gradient).  The best feasible centroid seen is returned.

Constraint convexity and objective concavity hold when per-platform values
are concave and costs convex in the bid index ("smooth" instances); the
approximation guarantee applies in that regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .landscape import FEASIBILITY_TOL, BidVector
from .oracle import CountingOracle
from .sampling import hit_and_run

#: Hit-and-run defaults: retained samples and discarded burn-in prefix.
DEFAULT_SAMPLE_BUDGET = 512
DEFAULT_BURN_IN = 256

# An estimate is rejected when more than this fraction of chain steps had
# numerically empty chords (the body has effectively collapsed).
_MAX_INVALID_FRACTION = 0.5


class DegenerateBodyError(RuntimeError):
    """The search body has numerically lost its interior."""


@dataclass(frozen=True)
class Halfspace:
    """Kept side: {x : normal . (x - anchor) <= 0}."""

    normal: tuple[float, ...]
    anchor: tuple[float, ...]

    def __post_init__(self):
        if not any(a != 0.0 for a in self.normal):
            raise ValueError("halfspace normal must be nonzero")

    @property
    def offset(self) -> float:
        return float(sum(a * p for a, p in zip(self.normal, self.anchor)))


@dataclass(frozen=True)
class Polytope:
    """A box intersected with accumulated halfspace cuts."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    cuts: tuple[Halfspace, ...] = ()

    @classmethod
    def box(cls, m: int, n: float) -> "Polytope":
        return cls((0.0,) * m, (float(n),) * m)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def with_cut(self, cut: Halfspace) -> "Polytope":
        return Polytope(self.lower, self.upper, self.cuts + (cut,))

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        lower = np.array(self.lower, dtype=np.float64)
        upper = np.array(self.upper, dtype=np.float64)
        if self.cuts:
            normals = np.array([c.normal for c in self.cuts], dtype=np.float64)
            offsets = np.array([c.offset for c in self.cuts], dtype=np.float64)
        else:
            normals = np.zeros((0, self.dim), dtype=np.float64)
            offsets = np.zeros(0, dtype=np.float64)
        return lower, upper, normals, offsets

    def contains(self, point: Sequence[float], tol: float = 1e-9) -> bool:
        x = np.asarray(point, dtype=np.float64)
        lower, upper, normals, offsets = self.as_arrays()
        if (x < lower - tol).any() or (x > upper + tol).any():
            return False
        if len(offsets) and (normals @ x > offsets + tol).any():
            return False
        return True


@dataclass(frozen=True)
class CentroidEstimate:
    point: tuple[float, ...]
    samples_used: int


@dataclass(frozen=True)
class SeparationResult:
    """Separation-oracle verdict plus the evaluations behind it.

    ``halfspace`` is None when feasible.  ``value_gradient`` carries the
    objective's per-coordinate segment slopes at the point (right segments
    at integer coordinates), reused for objective cuts.
    """

    feasible: bool
    halfspace: Halfspace | None
    value: float
    cost: float
    value_gradient: tuple[float, ...]


def _segment_data(oracle: CountingOracle, platform: int, coord: float) -> tuple[float, float, float, float]:
    """(value, cost, value slope, cost slope) at one coordinate.

    Slopes come from the segment containing the coordinate; integer
    coordinates use the right segment except at the top bid.
    """
    n = oracle.num_bids
    lo = math.floor(coord)
    if lo == coord:
        lo = int(lo)
        if lo == 0:
            value, cost = 0.0, 0.0
        else:
            ans = oracle.query(platform, lo)
            value, cost = ans.value, ans.cost
        if lo == n:
            if n == 1:
                prev_v, prev_c = 0.0, 0.0
            else:
                prev = oracle.query(platform, n - 1)
                prev_v, prev_c = prev.value, prev.cost
            return value, cost, value - prev_v, cost - prev_c
        nxt = oracle.query(platform, lo + 1)
        return value, cost, nxt.value - value, nxt.cost - cost
    lo = int(lo)
    if lo == 0:
        v_lo, c_lo = 0.0, 0.0
    else:
        ans_lo = oracle.query(platform, lo)
        v_lo, c_lo = ans_lo.value, ans_lo.cost
    ans_hi = oracle.query(platform, lo + 1)
    dv = ans_hi.value - v_lo
    dc = ans_hi.cost - c_lo
    frac = coord - lo
    return v_lo + frac * dv, c_lo + frac * dc, dv, dc


def separation_oracle(oracle: CountingOracle, point: Sequence[float]) -> SeparationResult:
    """Strong separation for the feasible set, via queried integer endpoints.

    A violated point yields the subgradient halfspace of the more violated
    constraint; every feasible strategy satisfies that halfspace, and the
    cut passes through the point itself.
    """
    m, n = oracle.num_platforms, oracle.num_bids
    coords = [float(c) for c in point]
    if len(coords) != m:
        raise ValueError(f"point length {len(coords)} does not match platform count {m}")
    for j, c in enumerate(coords):
        if not 0.0 <= c <= n:
            raise ValueError(f"coordinate {c} on platform {j} outside [0, {n}]")
    total_value = 0.0
    total_cost = 0.0
    dv = [0.0] * m
    dc = [0.0] * m
    for j in range(m):
        v, c, dvj, dcj = _segment_data(oracle, j, coords[j])
        total_value += v
        total_cost += c
        dv[j] = dvj
        dc[j] = dcj
    target = oracle.target_ros
    g_ros = total_cost - target * total_value
    g_budget = total_cost - oracle.budget
    if g_ros <= FEASIBILITY_TOL and g_budget <= FEASIBILITY_TOL:
        return SeparationResult(True, None, total_value, total_cost, tuple(dv))
    if g_ros >= g_budget:
        normal = tuple(dc[j] - target * dv[j] for j in range(m))
    else:
        normal = tuple(dc)
    return SeparationResult(
        False, Halfspace(normal, tuple(coords)), total_value, total_cost, tuple(dv)
    )


def _chain_centroid(
    polytope: Polytope,
    start: np.ndarray,
    sample_budget: int,
    burn_in: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """(mean of retained samples, the samples); raises on a collapsed body."""
    lower, upper, normals, offsets = polytope.as_arrays()
    samples, invalid = hit_and_run(
        start, lower, upper, normals, offsets, sample_budget, burn_in, rng
    )
    if invalid > _MAX_INVALID_FRACTION * (sample_budget + burn_in):
        raise DegenerateBodyError(
            f"{invalid} of {sample_budget + burn_in} chain steps found an empty chord"
        )
    return samples.mean(axis=0), samples


def estimate_centroid(
    polytope: Polytope,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
    rng_seed: int | np.random.SeedSequence = 0,
    *,
    start: Sequence[float] | None = None,
    burn_in: int = DEFAULT_BURN_IN,
) -> CentroidEstimate:
    """Hit-and-run estimate of the polytope centroid; deterministic in the seed."""
    if start is None:
        start_arr = (np.array(polytope.lower) + np.array(polytope.upper)) / 2.0
    else:
        start_arr = np.asarray(start, dtype=np.float64)
    if not polytope.contains(start_arr, tol=1e-9):
        raise DegenerateBodyError("start point is not inside the polytope")
    rng = np.random.default_rng(rng_seed)
    mean, _ = _chain_centroid(polytope, start_arr, sample_budget, burn_in, rng)
    return CentroidEstimate(tuple(float(v) for v in mean), sample_budget)


def centroid_method(
    oracle: CountingOracle,
    iterations: int,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
    rng_seed: int = 0,
    *,
    burn_in: int = DEFAULT_BURN_IN,
    trace: Callable[..., None] | None = None,
) -> BidVector:
    """Best feasible estimated centroid after the given number of cuts.

    Returns the zero strategy when no feasible centroid was seen (always
    feasible itself).  A numerically collapsed body ends the loop early
    with the best point so far.  ``trace``, if given, receives
    (round, centroid, separation result, polytope after the cut) per round.
    """
    m, n = oracle.num_platforms, oracle.num_bids
    poly = Polytope.box(m, n)
    interior = np.full(m, n / 2.0, dtype=np.float64)
    seeds = np.random.SeedSequence(rng_seed).spawn(max(iterations, 1))
    best_point: tuple[float, ...] | None = None
    best_value = -math.inf
    for t in range(iterations):
        rng = np.random.default_rng(seeds[t])
        try:
            centroid, samples = _chain_centroid(poly, interior, sample_budget, burn_in, rng)
        except DegenerateBodyError:
            break
        result = separation_oracle(oracle, centroid)
        if result.feasible:
            if result.value > best_value:
                best_value = result.value
                best_point = tuple(float(v) for v in centroid)
            # Keep the side positively correlated with the objective gradient.
            normal = tuple(-g for g in result.value_gradient)
        else:
            assert result.halfspace is not None
            normal = result.halfspace.normal
        cut = Halfspace(normal, tuple(float(v) for v in centroid))
        poly = poly.with_cut(cut)
        if trace is not None:
            trace(t, tuple(float(v) for v in centroid), result, poly)
        # Restart the walker at the retained sample deepest inside the new cut.
        normal_arr = np.array(cut.normal)
        slack = cut.offset - samples @ normal_arr
        idx = int(np.argmax(slack))
        if not slack[idx] > 0.0:
            break
        interior = samples[idx]
    if best_point is None:
        return BidVector.zeros(m)
    return BidVector(best_point)
