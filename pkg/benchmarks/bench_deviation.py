#!/usr/bin/env python3
"""Benchmark the deviation kernel: compiled extension vs numpy fallback.

The directed max-min distance dominates post-flight analysis on long logs
(every blueprint sample against every log sample). This script times both
backends on realistic log sizes and on the pathological worst case (two
parallel straight lines, where the compiled kernel's early exit cannot
prune), and checks they agree to 1e-9.

Usage: python benchmarks/bench_deviation.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dronefuzz._kernels import KERNEL_BACKEND, fallback

try:
    from dronefuzz._kernels._distfield import directed_max_min_distance as compiled
except ImportError:
    compiled = None


def flight_like(n: int, seed: int) -> np.ndarray:
    """A smooth 3D path with small jitter, like a sampled trajectory."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 60.0, n)
    path = np.column_stack(
        [
            30.0 * np.sin(t / 9.0),
            5.0 * t / 6.0,
            12.5 + 2.0 * np.sin(t / 4.0),
        ]
    )
    return np.ascontiguousarray(path + rng.normal(scale=0.05, size=path.shape))


def timed(fn, a, b, repeats: int) -> tuple[float, float]:
    best = float("inf")
    value = 0.0
    for _ in range(repeats):
        start = time.perf_counter()
        value = fn(a, b)
        best = min(best, time.perf_counter() - start)
    return value, best


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernel not built; only the numpy fallback is available")
        return 1

    print(f"default backend at import time: {KERNEL_BACKEND}")
    print(f"{'case':<28} {'n x m':<16} {'compiled':>12} {'numpy':>12} {'speedup':>9}")

    cases = [
        ("blueprint vs nominal", flight_like(600, 1), flight_like(800, 2)),
        ("blueprint vs stalled", flight_like(600, 1), flight_like(6000, 3)),
        ("long vs long", flight_like(2000, 4), flight_like(2000, 5)),
        (
            "worst case (no pruning)",
            np.ascontiguousarray(
                np.column_stack([np.linspace(0, 100, 2000), np.zeros(2000), np.zeros(2000)])
            ),
            np.ascontiguousarray(
                np.column_stack([np.linspace(0, 100, 2000), np.full(2000, 5.0), np.zeros(2000)])
            ),
        ),
    ]
    for name, a, b in cases:
        value_c, t_c = timed(compiled, a, b, args.repeats)
        value_f, t_f = timed(fallback.directed_max_min_distance, a, b, args.repeats)
        assert abs(value_c - value_f) <= 1e-9, (name, value_c, value_f)
        print(
            f"{name:<28} {len(a)}x{len(b):<12} {t_c * 1e3:>10.2f}ms {t_f * 1e3:>10.2f}ms "
            f"{t_f / t_c:>8.1f}x"
        )
    print("agreement within 1e-9 on every case")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
