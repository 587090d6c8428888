"""Instance generation, solve dispatch, and reproducible benchmark sweeps."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .augmented import branch_out_median_of_medians, prediction_error
from .centroid import centroid_method
from .landscape import BidVector, Instance, PlatformLandscape, evaluate
from .oracle import CountingOracle, QueryLedger
from .reference import ReferenceSolution, classify_binding, solve_reference
from .search import median_of_medians

MODES = ("strict", "smooth")
STYLES = ("slack", "binding")
ALGORITHMS = ("reference", "mom", "bmom", "centroid")


class SweepMismatchError(RuntimeError):
    """An exact algorithm disagreed with the reference solver during a sweep."""


@dataclass(frozen=True)
class GenConfig:
    """Recipe for one random instance; fully determined by the seed.

    strict mode draws strictly increasing marginal costs; smooth mode
    additionally makes value increments strictly decreasing and cost
    increments strictly increasing (concave values, convex costs).  A
    binding budget/ROS style scales the respective bound so that it is the
    one the reference solution ends up tight against; slack styles place
    the bound safely out of reach.
    """

    platforms: int
    bids: int
    seed: int
    mode: str = "strict"
    budget_style: str = "slack"
    ros_style: str = "slack"

    def __post_init__(self):
        if self.platforms < 1 or self.bids < 1:
            raise ValueError("need at least one platform and one bid")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES} (got {self.mode!r})")
        if self.budget_style not in STYLES or self.ros_style not in STYLES:
            raise ValueError(f"styles must be one of {STYLES}")


def _draw_landscape(rng: np.random.Generator, n: int, mode: str) -> PlatformLandscape:
    if mode == "strict":
        dv = rng.uniform(0.5, 2.0, n)
        mc = rng.uniform(0.05, 0.5) + np.concatenate(
            ([0.0], np.cumsum(rng.uniform(0.02, 0.25, n - 1)))
        )
        dc = mc * dv
    else:
        dv = np.sort(rng.uniform(0.3, 1.5, n))[::-1] + np.linspace(1e-6 * n, 0.0, n)
        dc = np.sort(rng.uniform(0.2, 1.0, n)) + np.linspace(0.0, 1e-6 * n, n)
    return PlatformLandscape(tuple(np.cumsum(dv)), tuple(np.cumsum(dc)), strict=True)


def generate(config: GenConfig) -> Instance:
    """Deterministic random instance matching the config's mode and styles."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    platforms = tuple(
        _draw_landscape(rng, config.bids, config.mode) for _ in range(config.platforms)
    )
    top_cost = sum(p.costs[-1] for p in platforms)
    top_value = sum(p.values[-1] for p in platforms)
    all_mc = [mc for p in platforms for mc in p.marginal_costs]
    mc_min, mc_max = min(all_mc), max(all_mc)
    if config.ros_style == "slack":
        target = 1.25 * mc_max
    else:
        # Strictly between the cheapest marginal and the all-in cost/value
        # ratio: the top strategy violates ROS but some strategy does not.
        target = mc_min + rng.uniform(0.15, 0.9) * (top_cost / top_value - mc_min)
    if config.budget_style == "slack":
        budget = 1.25 * top_cost
    else:
        probe = Instance(platforms, budget=2.0 * top_cost, target_ros=target)
        ros_cost = solve_reference(probe).cost
        if ros_cost <= 0.0:
            ros_cost = top_cost
        budget = rng.uniform(0.25, 0.9) * ros_cost
    return Instance(platforms, budget=budget, target_ros=target)


def make_prediction(
    optimum: BidVector, eta: float, num_bids: int, rng: np.random.Generator
) -> BidVector:
    """Perturb an optimum by per-platform offsets in [-eta, eta], clamped."""
    if eta < 0:
        raise ValueError("eta must be non-negative")
    bids = tuple(
        min(float(num_bids), max(0.0, b + rng.uniform(-eta, eta))) for b in optimum
    )
    return BidVector(bids)


def gradient_bound(instance: Instance) -> float:
    """Euclidean bound on the objective gradient over the whole box."""
    return math.sqrt(
        sum(
            max(
                plat.values[i] - (plat.values[i - 1] if i else 0.0)
                for i in range(plat.num_bids)
            )
            ** 2
            for plat in instance.platforms
        )
    )


def body_diameter(instance: Instance) -> float:
    """Diameter bound of the search box."""
    return math.sqrt(instance.num_platforms) * instance.num_bids


def feasible_fraction(instance: Instance, num_samples: int = 4096, seed: int = 0) -> float:
    """Monte-Carlo fraction of the box that is feasible (floored above zero)."""
    from .landscape import feasible

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    m, n = instance.num_platforms, instance.num_bids
    points = rng.uniform(0.0, n, size=(num_samples, m))
    hits = sum(1 for row in points if feasible(instance, BidVector(tuple(row))))
    return max(hits / num_samples, 1.0 / num_samples)


def centroid_iterations(
    instance: Instance, epsilon: float, gamma: float | None = None, seed: int = 0
) -> int:
    """Iteration count sized for an epsilon-accurate centroid run."""
    if gamma is None:
        gamma = feasible_fraction(instance, seed=seed)
    m = instance.num_platforms
    G = gradient_bound(instance)
    r = body_diameter(instance)
    return max(1, math.ceil(3.0 * m * math.log(4.0 * G * r / (gamma * epsilon))))


@dataclass
class SolveReport:
    """One algorithm run: solution, constraint status, and query counts."""

    algorithm: str
    optimum: list[float]
    value: float
    cost: float
    binding: str
    distinct_queries: int
    total_queries: int
    eta: float | None = None
    iterations: int | None = None
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "optimum": self.optimum,
            "value": self.value,
            "cost": self.cost,
            "binding": self.binding,
            "distinct_queries": self.distinct_queries,
            "total_queries": self.total_queries,
            "eta": self.eta,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
        }


def run_solver(
    instance: Instance,
    algorithm: str,
    *,
    prediction: BidVector | None = None,
    iterations: int | None = None,
    sample_budget: int = 512,
    seed: int = 0,
) -> tuple[SolveReport, QueryLedger | None]:
    """Run one algorithm on a fresh oracle and assemble its report.

    The reference algorithm bypasses the oracle entirely, so its query
    counts are zero.  bmom requires a prediction.  centroid sizes its
    iteration count automatically (5% accuracy target) when not given.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    started = time.perf_counter()
    ledger: QueryLedger | None = None
    eta: float | None = None
    iters_used: int | None = None
    if algorithm == "reference":
        solution = solve_reference(instance)
        optimum = solution.optimum
        counts = (0, 0)
    else:
        oracle = CountingOracle(instance)
        if algorithm == "mom":
            optimum = median_of_medians(oracle)
        elif algorithm == "bmom":
            if prediction is None:
                raise ValueError("bmom requires a prediction")
            optimum = branch_out_median_of_medians(oracle, prediction)
            eta = prediction_error(solve_reference(instance).optimum, prediction)
        else:
            if iterations is None:
                ref = solve_reference(instance)
                epsilon = 0.05 * max(ref.value, 1e-9)
                iterations = centroid_iterations(instance, epsilon, seed=seed)
            optimum = centroid_method(
                oracle, iterations, sample_budget=sample_budget, rng_seed=seed
            )
            iters_used = iterations
        counts = oracle.snapshot_counts()
        ledger = oracle.ledger
    value, cost = evaluate(instance, optimum)
    report = SolveReport(
        algorithm=algorithm,
        optimum=[float(b) for b in optimum],
        value=value,
        cost=cost,
        binding=classify_binding(instance, optimum).value,
        distinct_queries=counts[1],
        total_queries=counts[0],
        eta=eta,
        iterations=iters_used,
        wall_time=time.perf_counter() - started,
    )
    return report, ledger


@dataclass(frozen=True)
class BenchRow:
    m: int
    n: int
    eta: float | None
    algorithm: str
    trial: int
    distinct_queries: int
    total_queries: int
    matched_reference: bool


CSV_HEADER = "m,n,eta,algorithm,trial,distinct_queries,total_queries,matched_reference"

#: Componentwise tolerance for "exactly matches the reference optimum".
MATCH_TOL = 1e-9


def _styles_for_trial(trial: int) -> tuple[str, str]:
    # Alternate which constraint binds so sweeps cover both regimes.
    if trial % 2 == 0:
        return ("slack", "binding")  # (budget_style, ros_style)
    return ("binding", "slack")


def matches_reference(optimum: BidVector, reference: ReferenceSolution) -> bool:
    return all(abs(a - b) <= MATCH_TOL for a, b in zip(optimum, reference.optimum))


def _run_cell(args: tuple) -> BenchRow:
    base_seed, index, m, n, algorithm, eta, trial = args
    cell = np.random.default_rng(np.random.SeedSequence((base_seed, index)))
    inst_seed = int(cell.integers(2**63))
    pred_seed = int(cell.integers(2**63))
    budget_style, ros_style = _styles_for_trial(trial)
    # centroid's accuracy contract needs concave values and convex costs
    mode = "smooth" if algorithm == "centroid" else "strict"
    instance = generate(
        GenConfig(m, n, inst_seed, mode=mode, budget_style=budget_style, ros_style=ros_style)
    )
    ref = solve_reference(instance)
    oracle = CountingOracle(instance)
    if algorithm == "mom":
        optimum = median_of_medians(oracle)
        matched = matches_reference(optimum, ref)
    elif algorithm == "bmom":
        if eta is None or eta == 0:
            pred = ref.optimum
        else:
            pred = make_prediction(ref.optimum, eta, n, np.random.default_rng(pred_seed))
        optimum = branch_out_median_of_medians(oracle, pred)
        matched = matches_reference(optimum, ref)
    elif algorithm == "centroid":
        epsilon = 0.05 * max(ref.value, 1e-9)
        iters = centroid_iterations(instance, epsilon, seed=pred_seed)
        optimum = centroid_method(oracle, iters, rng_seed=pred_seed)
        value, _ = evaluate(instance, optimum)
        matched = value >= ref.value - epsilon
    else:
        raise ValueError(f"bench does not support algorithm {algorithm!r}")
    if algorithm in ("mom", "bmom") and not matched:
        raise SweepMismatchError(
            f"{algorithm} missed the reference optimum on instance seed {inst_seed} "
            f"(m={m}, n={n}, eta={eta}, trial={trial})"
        )
    total, distinct = oracle.snapshot_counts()
    return BenchRow(m, n, eta, algorithm, trial, distinct, total, matched)


def bench_sweep(
    grid: dict,
    trials: int,
    seed: int,
    jobs: int = 1,
) -> list[BenchRow]:
    """Run every grid cell on a fresh instance and oracle; rows in cell order.

    ``grid`` maps 'm', 'n', 'algo' (and optionally 'eta', applied to bmom
    only) to lists of values.  Any exact-algorithm mismatch against the
    reference aborts the sweep with the offending seed in the message.
    """
    ms = [int(v) for v in grid.get("m", [2])]
    ns = [int(v) for v in grid.get("n", [8])]
    algos = list(grid.get("algo", ["mom"]))
    etas = [float(v) for v in grid.get("eta", [0.0])]
    for algo in algos:
        if algo not in ("mom", "bmom", "centroid"):
            raise ValueError(f"bench does not support algorithm {algo!r}")
    cells = []
    index = 0
    for m in ms:
        for n in ns:
            for algo in algos:
                for eta in etas if algo == "bmom" else [None]:
                    for trial in range(trials):
                        cells.append((seed, index, m, n, algo, eta, trial))
                        index += 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(cell) for cell in cells]


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    """Byte-stable CSV rendering of bench rows."""
    lines = [CSV_HEADER]
    for row in rows:
        eta = "" if row.eta is None else repr(float(row.eta))
        matched = "true" if row.matched_reference else "false"
        lines.append(
            f"{row.m},{row.n},{eta},{row.algorithm},{row.trial},"
            f"{row.distinct_queries},{row.total_queries},{matched}"
        )
    return "\n".join(lines) + "\n"
