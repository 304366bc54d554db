#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-numpy twins.

The package picks a backend once at import time (POSDEFKIT_NO_NUMBA=1 forces
the numpy fallback).  Both implementations stay importable either way, so this
script times them side by side on the hot kernels with realistic argument
ranges: a dense lambda grid spanning negative rates through stiff decay.
"""
import time

import numpy as np

from posdefkit import _accel


def bench(fn, args, repeat=7, inner=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / inner


def make_cases(rng, n):
    lam = np.concatenate(
        [-rng.uniform(0.001, 2.0, max(1, n // 10)), rng.uniform(1e-6, 1000.0, n - max(1, n // 10))]
    )
    rng.shuffle(lam)
    w = rng.uniform(0.1, 1.0, lam.size)
    # (name, fast path, numpy twin, args)
    return [
        ("e_lambda", _accel.e_lambda_vals, _accel._np_e_lambda, (lam, 1.7)),
        ("e_lambda_dt", _accel.e_lambda_dt_vals, _accel._np_e_lambda_dt, (lam, 1.7)),
        ("e_lambda_damped", _accel.e_lambda_damped_vals, _accel._np_e_lambda_damped,
         (lam, 1.7, 0.25)),
        ("f_lambda", _accel.f_lambda_vals, _accel._np_f_lambda, (lam, 0.4)),
        ("one_minus_exp", _accel.one_minus_exp_vals, _accel._np_one_minus_exp, (lam, 2.0)),
        ("exp_weighted_sum", _accel.exp_weighted_sum, _accel._np_exp_weighted_sum,
         (lam, w, 1.3, 2)),
    ]


def run_table(cases, label, inner):
    print(label)
    print(f"{'kernel':<18} {'fast':>11} {'numpy':>11} {'speedup':>9}")
    for name, fast, np_fn, args in cases:
        t_fast = bench(fast, args, inner=inner)
        t_np = bench(np_fn, args, inner=inner)
        print(f"{name:<18} {t_fast * 1e6:>9.2f}us {t_np * 1e6:>9.2f}us "
              f"{t_np / t_fast:>8.1f}x")
    print()


def main():
    rng = np.random.default_rng(0)
    big = make_cases(rng, 50_000)
    # 41 points is the synthesis dictionary size; these kernels run thousands
    # of times at that size inside quadrature and fitting loops
    small = make_cases(rng, 41)

    print(f"active backend: {_accel.backend_name()}")
    if not _accel.numba_enabled():
        print("numba is disabled or absent; timing the numpy twin against itself")
    else:
        print("warming up (JIT compilation)...")
        for _, fast, _np_fn, args in big:
            fast(*args)
    print()
    run_table(big, "single call, 50,000 lambda points", inner=1)
    run_table(small, "per call, 41 lambda points x 2,000 calls", inner=2_000)


if __name__ == "__main__":
    main()
