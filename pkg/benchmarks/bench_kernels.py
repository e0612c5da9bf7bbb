"""Benchmark: compiled likelihood kernels vs the numpy fallback.

Times raw kernel evaluations at several sample sizes and one end-to-end
bootstrap (Gumbel refit statistic) per backend.  Run as:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

import blockmax as bm
from blockmax import _core


def best_of(fn, repeats=5, inner=200):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_kernels():
    print(f"available backends: {sorted(_core.BACKENDS)}")
    rows = []
    for n in (129, 2000, 10_000):
        x = bm.sample(bm.GevParams(80.0, 20.0, -0.05), n, seed=1).values
        for name, impl in sorted(_core.BACKENDS.items()):
            t_gum = best_of(lambda: impl.gumbel_nllh(x, 80.0, 20.0))
            t_gev = best_of(lambda: impl.gev_nllh(x, 80.0, 20.0, -0.05))
            rows.append((n, name, t_gum * 1e6, t_gev * 1e6))
    print(f"\n{'n':>6}  {'backend':<9} {'gumbel_nllh':>12} {'gev_nllh':>12}   (us/call)")
    for n, name, t_gum, t_gev in rows:
        print(f"{n:>6}  {name:<9} {t_gum:>12.2f} {t_gev:>12.2f}")
    for n in (129, 2000, 10_000):
        times = {name: t for m, name, t, _ in rows if m == n}
        if "compiled" in times:
            print(f"  n={n}: compiled is {times['python'] / times['compiled']:.1f}x "
                  "faster on gumbel_nllh")


def bench_bootstrap():
    sample = bm.sample(bm.GevParams(80.0, 20.0, 0.0), 129, seed=2)
    stat = lambda v: bm.fit_gumbel(v, compute_se=False).theta
    print("\nbootstrap (B=100, n=129, Gumbel refit statistic):")
    active = _core.BACKEND
    for name in sorted(_core.BACKENDS):
        _core.use_backend(name)
        t0 = time.perf_counter()
        rep = bm.bootstrap(sample, stat, b=100, seed=7)
        dt = time.perf_counter() - t0
        print(f"  {name:<9} {dt:6.2f} s   bias={np.round(rep.bias, 5)}")
    _core.use_backend(active)


if __name__ == "__main__":
    bench_kernels()
    bench_bootstrap()
