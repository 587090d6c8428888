"""Domain types and closed-form arithmetic for platform bidding landscapes.

A landscape maps integer bid indices 1..n to strictly increasing value and
cost totals (index 0 means non-participation and is pinned to zero).  The
marginal cost of a bid is the incremental cost per incremental value
relative to the previous bid, and is required to be non-decreasing in the
bid index.  Fractional bids are resolved by linear interpolation between
the neighbouring integer bids.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

#: Absolute slack used when checking the budget and return-on-spend
#: constraints.  Fractional rounding produces exactly-tight solutions that
#: must re-validate as feasible.
FEASIBILITY_TOL = 1e-9

# Relative slack for the monotone-marginal validation; absorbs last-bit
# rounding when marginals are recomputed from float differences.
_MC_MONOTONE_SLACK = 1e-12


class InvalidLandscapeError(ValueError):
    """A landscape or instance violates one of its structural invariants."""


def _marginals(values: Sequence[float], costs: Sequence[float]) -> tuple[float, ...]:
    out = []
    prev_v, prev_c = 0.0, 0.0
    for v, c in zip(values, costs):
        out.append((c - prev_c) / (v - prev_v))
        prev_v, prev_c = v, c
    return tuple(out)


@dataclass(frozen=True)
class PlatformLandscape:
    """One platform's discrete value/cost curves over bid indices 1..n.

    ``strict`` additionally requires strictly increasing marginal costs,
    the regime in which the exact solvers' optimality guarantee applies.
    """

    values: tuple[float, ...]
    costs: tuple[float, ...]
    # validation-mode flag, not part of the landscape data
    strict: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        costs = tuple(float(c) for c in self.costs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "costs", costs)
        if len(values) != len(costs):
            raise InvalidLandscapeError(
                f"values and costs must have equal length (got {len(values)} vs {len(costs)})"
            )
        if not values:
            raise InvalidLandscapeError("landscape needs at least one bid index")
        prev = 0.0
        for i, v in enumerate(values):
            if not (v > prev) or not math.isfinite(v):
                raise InvalidLandscapeError(
                    f"values must be positive and strictly increasing (violated at index {i + 1})"
                )
            prev = v
        prev = 0.0
        for i, c in enumerate(costs):
            if not (c > prev) or not math.isfinite(c):
                raise InvalidLandscapeError(
                    f"costs must be positive and strictly increasing (violated at index {i + 1})"
                )
            prev = c
        mc = _marginals(values, costs)
        for i in range(len(mc) - 1):
            slack = _MC_MONOTONE_SLACK * max(1.0, abs(mc[i]))
            if mc[i + 1] < mc[i] - slack:
                raise InvalidLandscapeError(
                    f"marginal costs must be non-decreasing (violated between bids {i + 1} and {i + 2})"
                )
            if self.strict and not mc[i + 1] > mc[i]:
                raise InvalidLandscapeError(
                    f"strict mode requires strictly increasing marginal costs "
                    f"(violated between bids {i + 1} and {i + 2})"
                )
        object.__setattr__(self, "_mc", mc)

    @property
    def num_bids(self) -> int:
        return len(self.values)

    @property
    def marginal_costs(self) -> tuple[float, ...]:
        """Marginal cost at every integer bid 1..n."""
        return self._mc  # type: ignore[attr-defined]

    @property
    def strict_marginals(self) -> bool:
        """Whether the marginals are in fact strictly increasing."""
        mc = self.marginal_costs
        return all(mc[i + 1] > mc[i] for i in range(len(mc) - 1))


@dataclass(frozen=True)
class Instance:
    """A whole problem: m landscapes plus budget and target return-on-spend."""

    platforms: tuple[PlatformLandscape, ...]
    budget: float
    target_ros: float

    def __post_init__(self):
        object.__setattr__(self, "platforms", tuple(self.platforms))
        object.__setattr__(self, "budget", float(self.budget))
        object.__setattr__(self, "target_ros", float(self.target_ros))
        if not self.platforms:
            raise InvalidLandscapeError("instance needs at least one platform")
        if not (self.budget >= 0.0) or not math.isfinite(self.budget):
            raise InvalidLandscapeError("budget must be a non-negative finite number")
        if not (self.target_ros > 0.0) or not math.isfinite(self.target_ros):
            raise InvalidLandscapeError("target_ros must be a positive finite number")
        n = self.platforms[0].num_bids
        for j, plat in enumerate(self.platforms):
            if plat.num_bids != n:
                raise InvalidLandscapeError(
                    f"all platforms must share the same bid count (platform {j} has "
                    f"{plat.num_bids}, expected {n})"
                )

    @property
    def num_platforms(self) -> int:
        return len(self.platforms)

    @property
    def num_bids(self) -> int:
        return self.platforms[0].num_bids

    @property
    def strict_marginals(self) -> bool:
        return all(p.strict_marginals for p in self.platforms)


@dataclass(frozen=True)
class BidVector:
    """A fractional bidding strategy, one coordinate in [0, n] per platform."""

    bids: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "bids", tuple(float(b) for b in self.bids))

    @classmethod
    def of(cls, bids: Iterable[float]) -> "BidVector":
        return cls(tuple(bids))

    @classmethod
    def zeros(cls, m: int) -> "BidVector":
        return cls((0.0,) * m)

    def __len__(self) -> int:
        return len(self.bids)

    def __iter__(self) -> Iterator[float]:
        return iter(self.bids)

    def __getitem__(self, j: int) -> float:
        return self.bids[j]

    def floor(self) -> "BidVector":
        return BidVector(tuple(float(math.floor(b)) for b in self.bids))

    def is_integral(self) -> bool:
        return all(float(b).is_integer() for b in self.bids)


@dataclass(frozen=True)
class QueryAnswer:
    """What one bidding query reveals: value, cost and the marginal cost.

    ``mc_defined`` is False only for bid 0, where a marginal cost does not
    exist; probing past the top bid yields the infinite sentinel, encoding
    that no further bid exists.
    """

    value: float
    cost: float
    marginal_cost: float
    mc_defined: bool = True


def marginal_cost(landscape: PlatformLandscape, bid: int) -> float:
    """Incremental cost per incremental value of moving to ``bid``."""
    if not float(bid).is_integer() or not 1 <= bid <= landscape.num_bids:
        raise ValueError(f"bid must be an integer in 1..{landscape.num_bids} (got {bid})")
    return landscape.marginal_costs[int(bid) - 1]


def interpolate(landscape: PlatformLandscape, bid: float) -> tuple[float, float]:
    """Value and cost at a fractional bid, linear between integer bids.

    Integer bids return the tabulated point exactly.
    """
    n = landscape.num_bids
    if not 0.0 <= bid <= n:
        raise ValueError(f"bid must lie in [0, {n}] (got {bid})")
    lo = math.floor(bid)
    if lo == bid:
        if lo == 0:
            return 0.0, 0.0
        return landscape.values[lo - 1], landscape.costs[lo - 1]
    frac = bid - lo
    v_lo = 0.0 if lo == 0 else landscape.values[lo - 1]
    c_lo = 0.0 if lo == 0 else landscape.costs[lo - 1]
    v_hi = landscape.values[lo]
    c_hi = landscape.costs[lo]
    return v_lo + frac * (v_hi - v_lo), c_lo + frac * (c_hi - c_lo)


def marginal_cost_fractional(landscape: PlatformLandscape, bid: float) -> float:
    """Marginal cost of a fractional bid: that of the next integer bid up."""
    if bid == 0:
        raise ValueError("marginal cost is undefined at bid 0 (non-participation)")
    if not 0.0 < bid <= landscape.num_bids:
        raise ValueError(f"bid must lie in (0, {landscape.num_bids}] (got {bid})")
    return marginal_cost(landscape, math.ceil(bid))


def evaluate(instance: Instance, strategy: BidVector) -> tuple[float, float]:
    """Total value and cost of a strategy, summed across platforms."""
    if len(strategy) != instance.num_platforms:
        raise ValueError(
            f"strategy length {len(strategy)} does not match platform count "
            f"{instance.num_platforms}"
        )
    total_value = 0.0
    total_cost = 0.0
    for plat, bid in zip(instance.platforms, strategy):
        v, c = interpolate(plat, bid)
        total_value += v
        total_cost += c
    return total_value, total_cost


def within_constraints(
    total_value: float, total_cost: float, budget: float, target_ros: float
) -> bool:
    """Both constraints, with the shared absolute tolerance."""
    return (
        total_cost <= target_ros * total_value + FEASIBILITY_TOL
        and total_cost <= budget + FEASIBILITY_TOL
    )


def feasible(instance: Instance, strategy: BidVector) -> bool:
    """Whether a strategy satisfies the return-on-spend and budget constraints."""
    total_value, total_cost = evaluate(instance, strategy)
    return within_constraints(total_value, total_cost, instance.budget, instance.target_ros)


def instance_to_dict(instance: Instance) -> dict:
    return {
        "budget": instance.budget,
        "target_ros": instance.target_ros,
        "platforms": [
            {"values": list(p.values), "costs": list(p.costs)} for p in instance.platforms
        ],
    }


def instance_from_dict(data: dict, strict: bool = False) -> Instance:
    """Build an Instance from the JSON schema, validating every invariant."""
    try:
        budget = data["budget"]
        target_ros = data["target_ros"]
        raw_platforms = data["platforms"]
    except (KeyError, TypeError) as exc:
        raise InvalidLandscapeError(f"instance file is missing required field: {exc}") from exc
    if not isinstance(raw_platforms, list) or not raw_platforms:
        raise InvalidLandscapeError("'platforms' must be a non-empty list")
    platforms = []
    for j, entry in enumerate(raw_platforms):
        try:
            values = entry["values"]
            costs = entry["costs"]
        except (KeyError, TypeError) as exc:
            raise InvalidLandscapeError(f"platform {j} is missing required field: {exc}") from exc
        try:
            platforms.append(PlatformLandscape(tuple(values), tuple(costs), strict=strict))
        except InvalidLandscapeError as exc:
            raise InvalidLandscapeError(f"platform {j}: {exc}") from exc
    return Instance(tuple(platforms), budget, target_ros)


def save_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2)
        fh.write("\n")


def load_instance(path: str, strict: bool = False) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidLandscapeError(f"instance file is not valid JSON: {exc}") from exc
    return instance_from_dict(data, strict=strict)
