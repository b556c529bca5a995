"""Compare the compiled kernels against the pure-NumPy fallback.

Run with: python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from divcast.backends import pure

try:
    from divcast.backends import _kernels_cy as compiled
except ImportError:
    compiled = None


def bench(label, fn, args, repeats=200):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    dt = (time.perf_counter() - t0) / repeats
    print(f"  {label:10s} {dt * 1e6:10.1f} us/call")
    return dt


def bench_ets_filter():
    rng = np.random.default_rng(7)
    T, m = 240, 12
    y = rng.uniform(100.0, 200.0, T)
    s0 = np.ones(m)
    args = (y, m, 1, 2, 2, 0.3, 0.05, 0.1, 0.95, 150.0, 0.5, s0)
    print("ets_filter (T=240, monthly, multiplicative damped):")
    t_pure = bench("pure", pure.ets_filter, args)
    if compiled is not None:
        t_cy = bench("compiled", compiled.ets_filter, args)
        print(f"  speedup    {t_pure / t_cy:10.1f}x")


def bench_best_split():
    rng = np.random.default_rng(7)
    F, n = 56, 2000
    xs = np.sort(rng.normal(size=(F, n)), axis=1)
    gs = rng.normal(size=(F, n))
    hs = rng.uniform(0.01, 1.0, size=(F, n))
    args = (xs, gs, hs, 1.0, 1e-3)
    print("best_split (56 features, 2000 rows):")
    t_pure = bench("pure", pure.best_split, args, repeats=50)
    if compiled is not None:
        t_cy = bench("compiled", compiled.best_split, args, repeats=50)
        print(f"  speedup    {t_pure / t_cy:10.1f}x")


if __name__ == "__main__":
    if compiled is None:
        print("compiled backend unavailable; benchmarking pure only")
    bench_ets_filter()
    bench_best_split()
