"""Timing comparison of the compiled and pure-numpy training kernels.

Runs the two hot loops (MLP gradient descent, SVR pairwise coordinate
descent) on identical synthetic inputs with both backends and reports
wall-clock times plus the speedup.  Usage:

    python3 benchmarks/bench_kernels.py [--size N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ucp_ensemble._kernels import _pykernels

try:
    from ucp_ensemble._kernels import _ckernels
except ImportError:
    _ckernels = None


def bench_mlp(mod, n, repeats):
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 1, size=(n, 8))
    y = rng.normal(size=n)
    best = float("inf")
    for _ in range(repeats):
        w1 = rng.uniform(-0.5, 0.5, size=(8, 8)).copy()
        b1 = rng.uniform(-0.5, 0.5, size=8).copy()
        w2 = rng.uniform(-0.5, 0.5, size=8).copy()
        start = time.perf_counter()
        mod.mlp_train(X, y, w1, b1, w2, 0.0, 0.01, 5000)
        best = min(best, time.perf_counter() - start)
    return best


def bench_svr(mod, n, repeats):
    rng = np.random.default_rng(1)
    X = rng.uniform(0, 1, size=(n, 8))
    sq = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2)
    K = np.exp(-0.5 * sq)
    y = rng.normal(20.0, 4.0, size=n)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        mod.svr_smo(K, y, 100.0, 0.1, 1e-4, 10000)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=40,
                        help="number of training rows (default 40)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions per measurement; best time wins")
    args = parser.parse_args()

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("compiled", _ckernels))
    else:
        print("compiled backend unavailable; timing pure python only")

    results = {}
    for kernel, fn in (("mlp_train", bench_mlp), ("svr_smo", bench_svr)):
        for name, mod in backends:
            results[kernel, name] = fn(mod, args.size, args.repeats)

    print(f"{'kernel':<12} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for kernel in ("mlp_train", "svr_smo"):
        py = results[kernel, "python"]
        cy = results.get((kernel, "compiled"))
        if cy is None:
            print(f"{kernel:<12} {py * 1e3:9.1f}ms {'-':>10} {'-':>8}")
        else:
            print(f"{kernel:<12} {py * 1e3:9.1f}ms {cy * 1e3:9.1f}ms {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
