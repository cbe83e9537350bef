#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs the Gauss-linking double sum and the point-cloud separation scan on
matched inputs across both lanes and prints a timing table.  The linking sum
dominates the runtime of the linking-route intersection index, which is why
it is the compiled hot spot.

    python benchmarks/bench_kernels.py [--sizes 128,256,512,1024] [--repeat 5]
"""

import argparse
import time

import numpy as np

from halfdisk import kernels


def curves(n, seed=0):
    rng = np.random.default_rng(seed)
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    c1 = np.stack([np.cos(t), np.sin(t), 0.05 * np.sin(3 * t)], axis=1)
    c2 = np.stack([1 + 0.8 * np.cos(t), 0.1 * rng.standard_normal() + 0 * t,
                   0.8 * np.sin(t)], axis=1)
    return np.ascontiguousarray(c1), np.ascontiguousarray(c2)


def clouds(n, seed=1):
    rng = np.random.default_rng(seed)
    return (np.ascontiguousarray(rng.normal(size=(n, 4))),
            np.ascontiguousarray(rng.normal(size=(n, 4)) + 0.3))


def timed(fn, *args, repeat):
    best = np.inf
    val = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, val


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="128,256,512,1024")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    impls = kernels.available_impls()
    print(f"active lane: {kernels.IMPL}; lanes under test: "
          f"{', '.join(impls)}\n")
    header = f"{'kernel':24s} {'n':>6s} " + " ".join(
        f"{name:>12s}" for name in impls)
    if len(impls) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        c1, c2 = curves(n)
        row = {}
        for name, mod in impls.items():
            t, val = timed(mod.linking_sum, c1, c2, repeat=args.repeat)
            row[name] = (t, val)
        line = f"{'linking_sum':24s} {n:6d} " + " ".join(
            f"{row[name][0] * 1e3:10.2f}ms" for name in impls)
        if len(impls) == 2:
            line += f" {row['numpy'][0] / row['cython'][0]:8.1f}x"
        print(line)
    for n in sizes:
        a, b = clouds(n)
        row = {}
        for name, mod in impls.items():
            t, _ = timed(mod.min_pairwise_dist, a, b, repeat=args.repeat)
            row[name] = t
        line = f"{'min_pairwise_dist':24s} {n:6d} " + " ".join(
            f"{row[name] * 1e3:10.2f}ms" for name in impls)
        if len(impls) == 2:
            line += f" {row['numpy'] / row['cython']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
