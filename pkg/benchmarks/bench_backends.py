#!/usr/bin/env python3
"""Benchmark the compiled sampling/KDE core against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--n N] [--repeat R]

Also cross-checks the two implementations: gamma draws must be bit-identical
(they consume the same bit stream), KDE values must agree to roundoff.
"""

import argparse
import time

import numpy as np

from wkreg import _fastpath_py
from wkreg.streams import Stream

try:
    from wkreg import _fastpath
except ImportError:
    _fastpath = None


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_gamma(impl, n, alpha, repeat):
    return best_of(repeat, lambda: impl.standard_gamma(Stream(4).generator, alpha, n))


def bench_kde(impl, samples, support, repeat):
    return best_of(repeat, lambda: impl.kde_gaussian(samples, support, 0.05))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=500_000, help="draws / samples per case")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best kept)")
    args = parser.parse_args()

    if _fastpath is None:
        print("compiled core is not built (pip install -e . or python setup.py build_ext --inplace)")
        print("timing the pure-Python fallback only\n")

    rng = np.random.default_rng(0)
    samples = np.ascontiguousarray(rng.normal(size=args.n))
    support = np.linspace(-4.0, 4.0, 241)

    cases = [
        ("gamma draws, alpha=0.25 (boosted)", lambda impl: bench_gamma(impl, args.n, 0.25, args.repeat)),
        ("gamma draws, alpha=2.5", lambda impl: bench_gamma(impl, args.n, 2.5, args.repeat)),
        ("kde on 241-point support", lambda impl: bench_kde(impl, samples, support, args.repeat)),
    ]

    print(f"{'case':<36} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, runner in cases:
        t_py = runner(_fastpath_py)
        if _fastpath is not None:
            t_c = runner(_fastpath)
            print(f"{name:<36} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>8.1f}x")
        else:
            print(f"{name:<36} {t_py:>9.3f}s {'-':>10} {'-':>9}")

    if _fastpath is not None:
        a = _fastpath.standard_gamma(Stream(9).generator, 0.25, 50_000)
        b = _fastpath_py.standard_gamma(Stream(9).generator, 0.25, 50_000)
        ka = _fastpath.kde_gaussian(samples[:50_000], support, 0.05)
        kb = _fastpath_py.kde_gaussian(samples[:50_000], support, 0.05)
        print(f"\ngamma draws bit-identical across backends: {np.array_equal(a, b)}")
        print(f"kde max abs difference: {np.abs(ka - kb).max():.2e}")


if __name__ == "__main__":
    main()
