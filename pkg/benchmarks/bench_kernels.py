#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Runs the three hot kernels on representative workloads and prints a
timing table.  Gracefully reports when the compiled core is not built
(`python setup.py build_ext --inplace` to build it).
"""
import time

import numpy as np

from homsim._kernels import py_kernels

try:
    from homsim._kernels import _ckernels as ckernels
except ImportError:
    ckernels = None


def timeit(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_gaussian(impl, n=2_000_000):
    rng = np.random.default_rng(0)
    t0 = rng.uniform(-4, 4, n)
    tau = rng.uniform(-4, 4, n)
    out = np.empty(n)
    return timeit(impl.gaussian_pair_density, t0, tau, 0.8, 9.42, -1, out)


def bench_mode_pair(impl, n=2_000_000):
    rng = np.random.default_rng(1)
    z = [np.ascontiguousarray(rng.normal(size=n) + 1j * rng.normal(size=n))
         for _ in range(4)]
    out = np.empty(n)
    return timeit(impl.mode_pair_density, *z, -1, out)


def bench_shifted_integral(impl, n_grid=6144, n_shifts=321, count=4096):
    rng = np.random.default_rng(2)
    z1 = np.ascontiguousarray(rng.normal(size=n_grid)
                              + 1j * rng.normal(size=n_grid))
    z2 = np.ascontiguousarray(rng.normal(size=n_grid)
                              + 1j * rng.normal(size=n_grid))
    shifts = np.arange(-(n_shifts // 2), n_shifts // 2 + 1, dtype=np.int64) * 4
    out = np.empty(shifts.size)
    start = (n_grid - count) // 2
    return timeit(impl.shifted_pair_integral, z1, z2, shifts, start, count,
                  0.004, -1, out)


BENCHES = [
    ("gaussian_pair_density (2e6 pts)", bench_gaussian),
    ("mode_pair_density (2e6 pts)", bench_mode_pair),
    ("shifted_pair_integral (321x4096)", bench_shifted_integral),
]


def main():
    if ckernels is None:
        print("compiled core not built; showing NumPy backend only")
    print(f"{'kernel':38s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, bench in BENCHES:
        t_py = bench(py_kernels)
        if ckernels is not None:
            t_c = bench(ckernels)
            print(f"{name:38s} {t_py * 1e3:8.2f}ms {t_c * 1e3:8.2f}ms "
                  f"{t_py / t_c:7.2f}x")
        else:
            print(f"{name:38s} {t_py * 1e3:8.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
