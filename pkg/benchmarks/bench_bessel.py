"""Time the compiled and numpy Bessel kernels on the argument mix seen by the MNC pdf.

Usage: python benchmarks/bench_bessel.py [--n N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fibercap.mathkit import bessel


def workload(n: int, seed: int = 0):
    """Orders 1..200 against complex arguments spanning the series, Debye and contour regimes."""
    rng = np.random.default_rng(seed)
    m = rng.integers(1, 201, n)
    mag = 10.0 ** rng.uniform(-3, 4, n)
    ang = rng.uniform(-0.45 * np.pi, 0.45 * np.pi, n)
    return m, mag * np.exp(1j * ang)


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="evaluations per run")
    ap.add_argument("--repeat", type=int, default=3, help="runs per backend; the best is reported")
    args = ap.parse_args(argv)

    m, z = workload(args.n)
    backends = ["python"]
    if bessel.BACKEND == "compiled":
        backends.insert(0, "compiled")
    else:
        print("compiled kernel not importable; timing the numpy kernel only")
    results = {}
    for b in backends:
        results[b] = bessel.log_iv_array(m, z, backend=b)
        t = best_time(lambda: bessel.log_iv_array(m, z, backend=b), args.repeat)
        print(f"{b:>9}: {t:8.3f} s  ({args.n / t:,.0f} evaluations/s)")
        results[b + "_t"] = t
    if len(backends) == 2:
        diff = np.max(np.abs(results["compiled"] - results["python"]) / np.maximum(1.0, np.abs(results["python"])))
        print(f"speed-up: {results['python_t'] / results['compiled_t']:.1f}x, max scaled difference {diff:.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
