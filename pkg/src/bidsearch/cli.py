"""Command line interface: gen, solve, bench, verify.

Exit codes: 0 success, 1 validation or usage failure, 2 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .harness import GenConfig, bench_sweep, generate, make_prediction, rows_to_csv, run_solver
from .landscape import BidVector, InvalidLandscapeError, load_instance, save_instance
from .reference import solve_reference


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("BIDSEARCH_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bidsearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--platforms", type=int, required=True)
    gen.add_argument("--bids", type=int, required=True)
    gen.add_argument("--seed", type=int, default=_default_seed())
    gen.add_argument("--mode", choices=["strict", "smooth"], default="strict")
    gen.add_argument("--budget-style", choices=["slack", "binding"], default="slack")
    gen.add_argument("--ros-style", choices=["slack", "binding"], default="slack")
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="solve an instance and print a JSON report")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--algo", choices=["mom", "bmom", "centroid", "reference"], required=True)
    solve.add_argument(
        "--prediction",
        help="bmom only: JSON file with m bids, or auto:ETA to perturb the reference optimum",
    )
    solve.add_argument("--iters", type=int, help="centroid only: iteration count (default: auto)")
    solve.add_argument("--samples", type=int, default=512, help="centroid sample budget per round")
    solve.add_argument("--seed", type=int, default=_default_seed())
    solve.add_argument("--ledger", help="write the query ledger to this JSONL file")

    bench = sub.add_parser("bench", help="run a benchmark sweep and write CSV")
    bench.add_argument(
        "--grid",
        required=True,
        help="semicolon-separated lists, e.g. 'm=2,4;n=8,32;algo=mom,bmom;eta=0,4'",
    )
    bench.add_argument("--trials", type=int, default=3)
    bench.add_argument("--seed", type=int, default=_default_seed())
    bench.add_argument("--out", required=True)
    bench.add_argument("--jobs", type=int, default=1)

    verify = sub.add_parser("verify", help="validate an instance and print its reference solution")
    verify.add_argument("file")
    return parser


def _parse_grid(spec: str) -> dict:
    grid: dict = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"grid entry {part!r} is not KEY=V1,V2,...")
        key, raw = part.split("=", 1)
        key = key.strip()
        values = [v.strip() for v in raw.split(",") if v.strip()]
        if key in ("m", "n"):
            grid[key] = [int(v) for v in values]
        elif key == "eta":
            grid[key] = [float(v) for v in values]
        elif key == "algo":
            grid[key] = values
        else:
            raise ValueError(f"unknown grid key {key!r}")
    return grid


def _load_prediction(spec: str, instance, seed: int) -> BidVector:
    if spec.startswith("auto:"):
        eta = float(spec.split(":", 1)[1])
        reference = solve_reference(instance)
        if eta == 0:
            return reference.optimum
        rng = np.random.default_rng(np.random.SeedSequence((seed, 0xB1D)))
        return make_prediction(reference.optimum, eta, instance.num_bids, rng)
    with open(spec, "r", encoding="utf-8") as fh:
        bids = json.load(fh)
    if not isinstance(bids, list):
        raise InvalidLandscapeError("prediction file must hold a JSON array of bids")
    return BidVector(tuple(float(b) for b in bids))


def _cmd_gen(args) -> int:
    config = GenConfig(
        platforms=args.platforms,
        bids=args.bids,
        seed=args.seed,
        mode=args.mode,
        budget_style=args.budget_style,
        ros_style=args.ros_style,
    )
    save_instance(generate(config), args.out)
    return 0


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    prediction = None
    if args.algo == "bmom":
        if not args.prediction:
            print("bidsearch: error: --algo bmom requires --prediction", file=sys.stderr)
            return 1
        prediction = _load_prediction(args.prediction, instance, args.seed)
    report, ledger = run_solver(
        instance,
        args.algo,
        prediction=prediction,
        iterations=args.iters,
        sample_budget=args.samples,
        seed=args.seed,
    )
    if args.ledger and ledger is not None:
        with open(args.ledger, "w", encoding="utf-8") as fh:
            fh.write(ledger.to_jsonl())
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_bench(args) -> int:
    grid = _parse_grid(args.grid)
    rows = bench_sweep(grid, trials=args.trials, seed=args.seed, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    return 0


def _cmd_verify(args) -> int:
    instance = load_instance(args.file)
    solution = solve_reference(instance)
    print(
        json.dumps(
            {
                "optimum": [float(b) for b in solution.optimum],
                "almost_optimal": [float(b) for b in solution.almost_optimal],
                "k_star": solution.k_star,
                "value": solution.value,
                "cost": solution.cost,
                "binding": solution.binding.value,
            }
        )
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_verify(args)
    except (InvalidLandscapeError, ValueError, OSError) as exc:
        print(f"bidsearch: error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, AssertionError) as exc:
        print(f"bidsearch: internal invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
