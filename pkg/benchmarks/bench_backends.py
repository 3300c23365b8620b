#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-NumPy fallback.

Runs each kernel on identical inputs through both backends and reports
best-of-N wall times plus the speedup.  Also times one end-to-end cohort
simulation through whichever backend the package selected at import.

Usage:
    python benchmarks/bench_backends.py [--n 1000000] [--repeats 7]
"""

import argparse
import time

import numpy as np

from netsurv import BACKEND, ScenarioSpec, build_scenario, simulate_cohort
from netsurv._kernels import pure

try:
    from netsurv._kernels import _fast
except ImportError:
    _fast = None


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="array length")
    ap.add_argument("--repeats", type=int, default=7, help="take best of N runs")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    mass = rng.exponential(size=args.n)
    # a profile-sized piecewise hazard: ~20 age/year segments
    edges = np.cumsum(rng.uniform(0.3, 0.8, size=20))
    rates = rng.uniform(0.005, 0.08, size=21)
    t = rng.uniform(0.0, edges[-1] * 1.2, size=args.n)
    km_times = np.sort(rng.exponential(scale=4.0, size=args.n))
    km_events = (rng.random(args.n) < 0.7).astype(np.int64)

    cases = [
        ("weibull_invert", lambda m: m.weibull_invert(mass, 1.5, 5.3)),
        ("constant_invert", lambda m: m.constant_invert(mass, 0.025)),
        ("piecewise_cumhaz", lambda m: m.piecewise_cumhaz(t, edges, rates)),
        ("piecewise_invert", lambda m: m.piecewise_invert(mass, edges, rates)),
        ("product_limit", lambda m: m.product_limit(km_times, km_events)),
    ]

    print(f"n = {args.n:,}, best of {args.repeats}")
    print(f"{'kernel':<18} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, call in cases:
        t_pure = best_of(lambda: call(pure), args.repeats)
        if _fast is None:
            print(f"{name:<18} {t_pure * 1e3:9.2f}ms {'n/a':>10} {'':>8}")
            continue
        t_fast = best_of(lambda: call(_fast), args.repeats)
        print(
            f"{name:<18} {t_pure * 1e3:9.2f}ms {t_fast * 1e3:9.2f}ms "
            f"{t_pure / t_fast:7.2f}x"
        )

    model = build_scenario(ScenarioSpec(rr=2.0))
    t_sim = best_of(
        lambda: simulate_cohort(model, 100_000, max_follow_up=10.0, seed=1),
        max(3, args.repeats // 2),
    )
    print(f"\nsimulate_cohort(n=100k) via '{BACKEND}' backend: {t_sim * 1e3:.1f}ms")
    if _fast is None:
        print("compiled extension not importable here; showing fallback only")


if __name__ == "__main__":
    main()
