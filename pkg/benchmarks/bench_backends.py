#!/usr/bin/env python3
"""Benchmark the compiled hit-and-run kernel against the numpy fallback.

The chord-stepping chain is the package's hot loop: the cutting-plane
solver walks hundreds of thousands of steps against a growing set of cuts.
This script times both kernels on identical inputs (same random stream)
and reports the speedup, then times one full centroid solve per backend.

Usage: python benchmarks/bench_backends.py [--steps N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bidsearch import CountingOracle, centroid_method, solve_reference
from bidsearch import _hitrun_py
from bidsearch.harness import GenConfig, centroid_iterations, generate

try:
    from bidsearch import _hitrun as _compiled
except ImportError:
    _compiled = None


def chain_workload(seed: int, steps: int, dim: int, ncuts: int):
    rng = np.random.default_rng(seed)
    lower = np.zeros(dim)
    upper = np.full(dim, 16.0)
    start = np.full(dim, 8.0)
    if ncuts:
        anchors = rng.uniform(5.0, 11.0, size=(ncuts, dim))
        normals = rng.standard_normal((ncuts, dim))
        offsets = (normals * anchors).sum(axis=1)
        flip = normals @ start > offsets
        normals[flip] *= -1.0
        offsets[flip] *= -1.0
    else:
        normals = np.zeros((0, dim))
        offsets = np.zeros(0)
    dirs = rng.standard_normal((steps, dim))
    dirs /= np.sqrt((dirs * dirs).sum(axis=1))[:, None]
    uniforms = rng.random(steps)
    return start, lower, upper, normals, offsets, dirs, uniforms


def time_kernel(kernel, workload, repeats: int = 3) -> float:
    start, lower, upper, normals, offsets, dirs, uniforms = workload
    out = np.empty_like(dirs)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel.run_chain(start.copy(), lower, upper, normals, offsets, dirs, uniforms, out)
        best = min(best, time.perf_counter() - t0)
    return best


def time_centroid(kernel_name: str, seed: int = 4) -> float:
    # swap the selected implementation in place for the duration of the run
    import bidsearch.sampling as sampling

    impl = _compiled if kernel_name == "compiled" else _hitrun_py
    previous = sampling._impl
    sampling._impl = impl
    try:
        instance = generate(GenConfig(3, 16, seed, mode="smooth", ros_style="binding"))
        ref = solve_reference(instance)
        iters = centroid_iterations(instance, 0.05 * ref.value, seed=seed)
        t0 = time.perf_counter()
        oracle = CountingOracle(instance)
        centroid_method(oracle, iters, rng_seed=seed)
        return time.perf_counter() - t0
    finally:
        sampling._impl = previous


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=50_000)
    args = parser.parse_args()

    if _compiled is None:
        print("compiled kernel not built; showing fallback timings only")

    print(f"{'workload':<28}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for dim, ncuts in [(2, 0), (3, 8), (3, 64), (8, 128)]:
        workload = chain_workload(dim * 100 + ncuts, args.steps, dim, ncuts)
        t_py = time_kernel(_hitrun_py, workload)
        label = f"chain m={dim} cuts={ncuts}"
        if _compiled is None:
            print(f"{label:<28}{t_py * 1e3:>10.1f}ms{'-':>12}{'-':>10}")
            continue
        t_c = time_kernel(_compiled, workload)
        print(f"{label:<28}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms{t_py / t_c:>9.1f}x")

    t_py = time_centroid("python")
    if _compiled is not None:
        t_c = time_centroid("compiled")
        print(f"{'centroid solve m=3 n=16':<28}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms"
              f"{t_py / t_c:>9.1f}x")
    else:
        print(f"{'centroid solve m=3 n=16':<28}{t_py * 1e3:>10.1f}ms{'-':>12}{'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
