#!/usr/bin/env python3
"""Compare the compiled grid kernel against the numpy fallback.

Usage: python benchmarks/bench_kernel.py [--sizes 200,400,800] [--n-max 8]
"""

import argparse
import time

import numpy as np

from ivpp import kernel
from ivpp.maps import f2d


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="200,400,800")
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args()

    m = f2d()
    backends = {}
    try:
        backends["cython"] = kernel.load_backend("cython")
    except ImportError:
        print("compiled kernel not available; benchmarking the fallback only")
    backends["python"] = kernel.load_backend("python")

    sizes = [int(s) for s in args.sizes.split(",")]
    header = f"{'grid':>10} " + " ".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for n in sizes:
        xs = np.linspace(-4, 4, n)
        ys = np.linspace(-4, 4, n)
        row = [f"{n}x{n:<6}"]
        timings = {}
        for name, impl in backends.items():
            timings[name] = best_of(
                lambda impl=impl: kernel.period_grid(
                    m, xs, ys, args.n_max, args.tol, backend=impl
                )
            )
            row.append(f"{timings[name] * 1e3:>10.1f}ms")
        if len(timings) == 2:
            row.append(f"{timings['python'] / timings['cython']:>8.1f}x")
        print(" ".join(row))


if __name__ == "__main__":
    main()
