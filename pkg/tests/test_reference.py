"""Reference solver against independent oracles: enumeration and grid search."""

from __future__ import annotations

import math

import numpy as np
import pytest

from bidsearch import (
    Binding,
    BidVector,
    Instance,
    evaluate,
    feasibility_threshold_scan,
    solve_reference,
    threshold_strategy,
)
from bidsearch.harness import GenConfig, generate

STYLE_COMBOS = [
    ("slack", "binding"),
    ("binding", "slack"),
    ("binding", "binding"),
    ("slack", "slack"),
]


def independent_threshold(instance: Instance, k: float) -> list[int]:
    # Linear scan on raw finite differences (no shared code with the solver).
    out = []
    for plat in instance.platforms:
        best = 0
        prev_v, prev_c = 0.0, 0.0
        for bid in range(1, plat.num_bids + 1):
            v, c = plat.values[bid - 1], plat.costs[bid - 1]
            if (c - prev_c) / (v - prev_v) <= k:
                best = bid
            prev_v, prev_c = v, c
        out.append(best)
    return out


def grid_best_value(instance: Instance, per_unit: int = 64) -> float:
    """Best feasible value on a dense grid, via numpy interpolation only."""
    n, m = instance.num_bids, instance.num_platforms
    axis = np.linspace(0.0, n, n * per_unit + 1)
    knots = np.arange(n + 1, dtype=float)
    per = []
    for plat in instance.platforms:
        v = np.interp(axis, knots, np.concatenate(([0.0], plat.values)))
        c = np.interp(axis, knots, np.concatenate(([0.0], plat.costs)))
        per.append((v, c))
    target, budget, tol = instance.target_ros, instance.budget, 1e-9

    def best_of(value, cost):
        mask = (cost <= target * value + tol) & (cost <= budget + tol)
        return float(value[mask].max()) if mask.any() else 0.0

    if m == 1:
        return best_of(*per[0])
    if m == 2:
        value = per[0][0][:, None] + per[1][0][None, :]
        cost = per[0][1][:, None] + per[1][1][None, :]
        return best_of(value, cost)
    assert m == 3
    tail_v = per[1][0][:, None] + per[2][0][None, :]
    tail_c = per[1][1][:, None] + per[2][1][None, :]
    best = 0.0
    chunk = 16
    for i in range(0, len(axis), chunk):
        sl = slice(i, min(i + chunk, len(axis)))
        value = per[0][0][sl][:, None, None] + tail_v[None, :, :]
        cost = per[0][1][sl][:, None, None] + tail_c[None, :, :]
        best = max(best, best_of(value, cost))
    return best


class TestThresholdStrategy:
    def test_zero_threshold(self, two_platform_instance):
        assert threshold_strategy(two_platform_instance, 0.0) == BidVector((0.0, 0.0))

    def test_infinite_threshold(self, two_platform_instance):
        assert threshold_strategy(two_platform_instance, math.inf) == BidVector((3.0, 3.0))

    def test_mid_threshold(self, two_platform_instance):
        # marginals {0.25, 0.5, 1.125} and {0.3, 0.55, 0.925}: at 0.55 both stop at 2
        got = threshold_strategy(two_platform_instance, 0.55)
        assert got == BidVector((2.0, 2.0))
        assert list(got) == independent_threshold(two_platform_instance, 0.55)

    def test_matches_independent_scan(self):
        rng = np.random.default_rng(3)
        for trial in range(40):
            cfg = GenConfig(
                int(rng.integers(1, 5)),
                int(rng.integers(1, 9)),
                seed=int(rng.integers(2**63)),
                budget_style=STYLE_COMBOS[trial % 4][0],
                ros_style=STYLE_COMBOS[trial % 4][1],
            )
            instance = generate(cfg)
            for _ in range(5):
                k = float(rng.uniform(0.0, 2.0))
                assert list(threshold_strategy(instance, k)) == independent_threshold(
                    instance, k
                )

    def test_negative_threshold_rejected(self, two_platform_instance):
        with pytest.raises(ValueError):
            threshold_strategy(two_platform_instance, -0.1)


class TestSolveReference:
    def test_ros_binding_example(self, two_platform_instance):
        sol = solve_reference(two_platform_instance)
        assert sol.k_star == pytest.approx(0.925, abs=1e-12)
        assert sol.almost_optimal == BidVector((2.0, 3.0))
        # tightness: 7.5 + 2.25 x = 0.45 (17 + 2 x)  =>  x = 1/9
        assert sol.optimum.bids == pytest.approx((2.0 + 1.0 / 9.0, 3.0), abs=1e-12)
        assert sol.value == pytest.approx(17.0 + 2.0 / 9.0, abs=1e-9)
        assert sol.cost == pytest.approx(7.75, abs=1e-9)
        assert sol.binding is Binding.ROS

    def test_budget_binding_example(self, two_platform_tight_budget):
        sol = solve_reference(two_platform_tight_budget)
        assert sol.almost_optimal == BidVector((2.0, 3.0))
        # budget tightness: 7.5 + 2.25 x = 7.6  =>  x = 2/45
        assert sol.optimum.bids == pytest.approx((2.0 + 0.1 / 2.25, 3.0), abs=1e-12)
        assert sol.cost == pytest.approx(7.6, abs=1e-9)
        assert sol.binding is Binding.BUDGET

    def test_everything_slack_tops_out(self, two_platform_instance):
        inst = Instance(two_platform_instance.platforms, budget=1000.0, target_ros=10.0)
        sol = solve_reference(inst)
        assert sol.optimum == BidVector((3.0, 3.0))
        assert sol.binding is Binding.NONE

    def test_grid_certificate(self):
        # the solver is never beaten by dense grid search over the box
        rng = np.random.default_rng(17)
        sizes = [1] * 500 + [2] * 350 + [3] * 150
        for trial, m in enumerate(sizes):
            n = int(rng.integers(2, 7))
            combo = STYLE_COMBOS[trial % 4]
            instance = generate(
                GenConfig(m, n, seed=int(rng.integers(2**63)),
                          budget_style=combo[0], ros_style=combo[1])
            )
            sol = solve_reference(instance)
            assert sol.value >= grid_best_value(instance) - 1e-6, (
                f"grid beat the solver on trial {trial} (m={m}, n={n})"
            )


class TestThresholdScan:
    def test_example_pattern(self, two_platform_instance):
        scan = feasibility_threshold_scan(two_platform_instance)
        ks = [k for k, _ in scan]
        assert ks == pytest.approx([0.25, 0.3, 0.5, 0.55, 0.925, 1.125], abs=1e-12)
        assert [f for _, f in scan] == [True, True, True, True, True, False]

    def test_large_target_all_feasible(self, two_platform_instance):
        inst = Instance(two_platform_instance.platforms, budget=1000.0, target_ros=10.0)
        assert all(f for _, f in feasibility_threshold_scan(inst))

    def test_tiny_target_all_infeasible(self, two_platform_instance):
        # the type requires a positive target, so use a vanishing one
        inst = Instance(two_platform_instance.platforms, budget=1000.0, target_ros=1e-12)
        assert not any(f for _, f in feasibility_threshold_scan(inst))

    def test_monotone_prefix_property(self):
        rng = np.random.default_rng(23)
        for trial in range(300):
            combo = STYLE_COMBOS[trial % 4]
            instance = generate(
                GenConfig(
                    int(rng.integers(1, 6)),
                    int(rng.integers(1, 17)),
                    seed=int(rng.integers(2**63)),
                    budget_style=combo[0],
                    ros_style=combo[1],
                )
            )
            flags = [f for _, f in feasibility_threshold_scan(instance)]
            assert flags == sorted(flags, reverse=True), f"non-monotone scan on trial {trial}"


class TestSolutionInvariants:
    def test_tightness_and_floor_identity(self):
        rng = np.random.default_rng(31)
        for trial in range(200):
            combo = STYLE_COMBOS[trial % 4]
            n = int(rng.integers(1, 17))
            instance = generate(
                GenConfig(
                    int(rng.integers(1, 6)),
                    n,
                    seed=int(rng.integers(2**63)),
                    budget_style=combo[0],
                    ros_style=combo[1],
                )
            )
            sol = solve_reference(instance)
            value, cost = evaluate(instance, sol.optimum)
            at_top = all(b == n for b in sol.optimum)
            if not at_top:
                bound = min(instance.budget, instance.target_ros * value)
                assert abs(cost - bound) <= 1e-9
            assert sol.optimum.floor() == sol.almost_optimal
