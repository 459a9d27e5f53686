#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-NumPy fallback.

Times each kernel on representative sizes, then (optionally) a whole
5000-step benchmark run per backend in subprocesses.

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --end-to-end
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from avgdiff import _kernels_py

try:
    from avgdiff import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_of(func, args, repeats, inner):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            func(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def kernel_cases(K, n_terms):
    rng = np.random.default_rng(0)
    u = rng.standard_normal(K)
    dx = 2.0 * np.pi / K
    coeffs = np.array([0.0, 0.0, 0.5, 0.0, 0.25])
    a = rng.standard_normal(K)
    b = rng.standard_normal(K)
    amps = rng.standard_normal(n_terms)
    modes = np.arange(1.0, n_terms + 1.0)
    shifts = rng.uniform(-np.pi, np.pi, n_terms)
    x = rng.uniform(0.0, 2.0 * np.pi, K)
    return [
        ("central_diff", (u, dx)),
        ("forward_diff", (u, dx)),
        ("forward_average", (u,)),
        ("poly_eval", (coeffs, u)),
        ("divided_difference", (coeffs, a, b)),
        (f"cosine_series[{n_terms}]", (amps, modes, shifts, x)),
        ("total_variation", (u,)),
    ]


def bench_kernels(K, n_terms, repeats, inner):
    print(f"kernel micro-benchmarks (K={K}, best of {repeats} x {inner} calls)")
    print(f"{'kernel':>28} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, args in kernel_cases(K, n_terms):
        name = label.split("[")[0]
        t_py = best_of(getattr(_kernels_py, name), args, repeats, inner)
        if _kernels_cy is None:
            print(f"{label:>28} {t_py * 1e6:>10.2f}us {'n/a':>12} {'':>9}")
            continue
        t_cy = best_of(getattr(_kernels_cy, name), args, repeats, inner)
        print(f"{label:>28} {t_py * 1e6:>10.2f}us {t_cy * 1e6:>10.2f}us "
              f"{t_py / t_cy:>8.1f}x")


_END_TO_END = (
    "import time, numpy as np, avgdiff as av\n"
    "grid = av.PeriodicGrid(129)\n"
    "u0 = av.step_initial(grid)\n"
    "dens = av.HamiltonianDensity((0.0, 0.0, 0.5, 0.0, 0.25))\n"
    "scheme = av.SchemeInstance(av.SchemeKind.AVERAGE_DIFF, grid, dens, 0.01)\n"
    "t0 = time.perf_counter()\n"
    "scheme.run(u0, 5000)\n"
    "print(f'{av.backend_name()}: {time.perf_counter() - t0:.3f} s "
    "(5000 quartic steps, K=129)')\n"
)


def bench_end_to_end():
    print("\nend-to-end (quartic density forces the iterative path):")
    for backend in ("python", "compiled"):
        if backend == "compiled" and _kernels_cy is None:
            print("compiled: extension not built")
            continue
        env = dict(os.environ, AVGDIFF_BACKEND=backend)
        proc = subprocess.run([sys.executable, "-c", _END_TO_END], env=env,
                              capture_output=True, text=True)
        sys.stdout.write(proc.stdout or proc.stderr)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--K", type=int, default=129)
    ap.add_argument("--series-terms", type=int, default=50000)
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--inner", type=int, default=200)
    ap.add_argument("--end-to-end", action="store_true",
                    help="also time full runs in subprocesses")
    args = ap.parse_args()
    if _kernels_cy is None:
        print("note: compiled extension not importable, timing python only")
    bench_kernels(args.K, args.series_terms, args.repeats, args.inner)
    if args.end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
