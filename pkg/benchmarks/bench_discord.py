#!/usr/bin/env python3
"""Benchmark the discord measurement-grid kernel: numba JIT vs numpy fallback.

The grid evaluation of the measured conditional entropy is the hot loop of
every discord computation (one 64x64 scan plus a refinement per state).
This script times both backends on states drawn from an actual trajectory
and reports per-call costs and the speedup.

Usage:
    python benchmarks/bench_discord.py [--grid 64] [--states 40] [--repeats 3]
"""

import argparse
import time

import numpy as np

from bathlink._kernels import (
    conditional_entropy_grid_numpy,
    numba_available,
)
from bathlink.dynamics import evolve_exact, product_state
from bathlink.model import ModelParams, build_liouvillian


def trajectory_states(n):
    params = ModelParams.from_rates(1.01, 0.01, 1.0, 0.001)
    liou = build_liouvillian(params)
    traj = evolve_exact(liou, product_state(1.0, 0.0), np.linspace(0.0, 6.0, n))
    return [np.ascontiguousarray(s) for s in traj.states]


def time_backend(fn, states, thetas, phis, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for rho in states:
            fn(rho, thetas, phis)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=64, help="angle grid size per axis")
    ap.add_argument("--states", type=int, default=40, help="trajectory states to scan")
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats (best kept)")
    args = ap.parse_args()

    states = trajectory_states(args.states)
    thetas = np.linspace(0.0, np.pi, args.grid)
    phis = np.linspace(0.0, 2.0 * np.pi, args.grid, endpoint=False)

    t_numpy = time_backend(conditional_entropy_grid_numpy, states, thetas, phis,
                           args.repeats)
    print(f"numpy fallback: {t_numpy:.4f} s total, "
          f"{1e3 * t_numpy / len(states):.3f} ms per state")

    if not numba_available():
        print("numba backend: not importable, skipping")
        return

    from bathlink._kernels import _cond_entropy_grid_numba

    _cond_entropy_grid_numba(states[0], thetas, phis)  # compile outside the timer
    t_numba = time_backend(_cond_entropy_grid_numba, states, thetas, phis,
                           args.repeats)
    print(f"numba kernel:   {t_numba:.4f} s total, "
          f"{1e3 * t_numba / len(states):.3f} ms per state")
    print(f"speedup: {t_numpy / t_numba:.1f}x")

    worst = max(
        float(np.abs(conditional_entropy_grid_numpy(rho, thetas, phis)
                     - _cond_entropy_grid_numba(rho, thetas, phis)).max())
        for rho in states
    )
    print(f"max |numpy - numba| over the scan: {worst:.3e}")


if __name__ == "__main__":
    main()
