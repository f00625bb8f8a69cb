"""Compiled vs pure-Python timings for the trajectory kernels.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]

Each kernel is called once to trigger compilation, then timed as the best of
``--repeat`` runs. The pure-Python column calls the same source through
``.py_func``, which is what ``SUPERINT_DISABLE_NUMBA=1`` selects. Both columns
must agree numerically; the script checks that before printing.
"""

import argparse
import time

import numpy as np

from superint import catalog, kernels
from superint._accel import NUMBA_ENABLED


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000, help="leapfrog steps per run")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    m = catalog.coulomb3_reduced(1.0, 0.2, 0.3, 0.4)
    quad, barrier, gamma = m.potential.arrays()
    q0 = np.array([2.5, 2.2, 2.8])
    p0 = np.array([0.05, -0.1, 0.08])
    y0 = np.concatenate([q0, p0])
    t_end = 100.0

    cases = {
        "verlet_run": (kernels.verlet_run, (q0, p0, 1e-3, args.steps, 100, quad, barrier, gamma, 1e-9)),
        "euler_run": (kernels.euler_run, (q0, p0, 1e-3, args.steps, 100, quad, barrier, gamma, 1e-9)),
        "dopri_run": (kernels.dopri_run, (y0, t_end, 1e-10, 1e-12, quad, barrier, gamma, 1e-9, 0.0, 10**7)),
    }

    print(f"numba enabled: {NUMBA_ENABLED}; leapfrog/Euler steps: {args.steps}; rk45 to t = {t_end:g}")
    print(f"{'kernel':<12} {'compiled [s]':>13} {'python [s]':>12} {'speedup':>9}")
    for name, (kern, call_args) in cases.items():
        kern(*call_args)  # compile
        t_jit, out_jit = best_of(lambda: kern(*call_args), args.repeat)
        t_py, out_py = best_of(lambda: kern.py_func(*call_args), max(1, args.repeat // 3))
        np.testing.assert_allclose(out_jit[1], out_py[1], rtol=1e-10, atol=1e-12)
        print(f"{name:<12} {t_jit:>13.4f} {t_py:>12.4f} {t_py / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
