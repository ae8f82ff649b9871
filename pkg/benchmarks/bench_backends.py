#!/usr/bin/env python3
"""Compare the jitted simulation kernels against the pure-Python fallback.

Each workload runs in two subprocesses, one with numba enabled and one with
``MCB_NO_NUMBA=1``. The child warms the kernel once (so jit compilation is
excluded from the timing), times a second identical run, and emits a digest
of the result JSON; the parent prints a table with the speedup and checks
that both backends produced byte-identical output.

Usage:
    python benchmarks/bench_backends.py [--grid-reps N] [--halfline-reps N]
                                        [--rwm-reps N]
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time


def _workload(name: str, sizes: dict):
    from mcbounds.coupling import (
        CouplingConfig,
        run_small_set_coupling,
        run_uniform_coupling,
    )
    from mcbounds.finite_chain import ProbVector, build_grid_walk, minorization_pseudo

    if name == "grid-pseudo":
        grid = build_grid_walk(3, 3)
        config = CouplingConfig(
            model="finite",
            n_max=60,
            replications=sizes["grid_reps"],
            master_seed=42,
            matrix=grid,
            cert=minorization_pseudo(grid, 2),
            initial_law=ProbVector.delta(9, 4),
        )
        return lambda: run_uniform_coupling(config)
    if name == "halfline":
        config = CouplingConfig(
            model="halfline",
            n_max=12,
            replications=sizes["halfline_reps"],
            master_seed=7,
            burn_in=200,
        )
        return lambda: run_uniform_coupling(config)
    if name == "rwm-smallset":
        config = CouplingConfig(
            model="rwm-laplace",
            n_max=2_000,
            replications=sizes["rwm_reps"],
            master_seed=11,
            burn_in=1_000,
            record_every=10,
        )
        return lambda: run_small_set_coupling(config)
    raise SystemExit(f"unknown workload {name}")


def _child(name: str, sizes: dict) -> None:
    run = _workload(name, sizes)
    run()  # warm-up: triggers compilation on the jitted backend
    start = time.perf_counter()
    result = run()
    elapsed = time.perf_counter() - start
    payload = json.dumps(result.to_jsonable(), sort_keys=True).encode()
    print(
        json.dumps(
            {
                "elapsed": elapsed,
                "digest": hashlib.sha256(payload).hexdigest(),
            }
        )
    )


def _run_child(name: str, sizes: dict, disable_numba: bool) -> dict:
    env = dict(os.environ, MCB_NO_NUMBA="1" if disable_numba else "0")
    out = subprocess.run(
        [sys.executable, __file__, "--child", name, "--sizes", json.dumps(sizes)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--child", help=argparse.SUPPRESS)
    parser.add_argument("--sizes", help=argparse.SUPPRESS)
    parser.add_argument("--grid-reps", type=int, default=20_000)
    parser.add_argument("--halfline-reps", type=int, default=4_000)
    parser.add_argument("--rwm-reps", type=int, default=200)
    args = parser.parse_args()

    if args.child:
        _child(args.child, json.loads(args.sizes))
        return 0

    sizes = {
        "grid_reps": args.grid_reps,
        "halfline_reps": args.halfline_reps,
        "rwm_reps": args.rwm_reps,
    }
    print(f"sizes: {sizes}")
    header = f"{'workload':<14} {'numba (s)':>10} {'python (s)':>11} {'speedup':>8}  identical"
    print(header)
    print("-" * len(header))
    for name in ("grid-pseudo", "halfline", "rwm-smallset"):
        jit = _run_child(name, sizes, disable_numba=False)
        pure = _run_child(name, sizes, disable_numba=True)
        same = "yes" if jit["digest"] == pure["digest"] else "NO"
        speedup = pure["elapsed"] / jit["elapsed"]
        print(
            f"{name:<14} {jit['elapsed']:>10.3f} {pure['elapsed']:>11.3f} "
            f"{speedup:>7.1f}x  {same}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
