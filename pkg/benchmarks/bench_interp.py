"""Benchmark the particle-interpolation hot kernel: numba vs pure numpy.

The sampler evaluates six B-spline surfaces (two velocity components plus
the four velocity-gradient entries) at every particle, four times per RK4
step, which makes it the dominant particle-side cost.  Run:

    python benchmarks/bench_interp.py

TORUSFLOW_NUMBA=0 would force the numpy path package-wide; here both
implementations are timed side by side in one process.
"""

import time

import numpy as np

from torusflow import _kernels
from torusflow.grid import make_grid
from torusflow.interpolate import bspline_prefilter


def time_call(fn, *args, repeats=7):
    fn(*args)  # warm-up (and JIT compile for the numba path)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    grid = make_grid(64)
    rng = np.random.default_rng(0)
    fields = rng.standard_normal((6, grid.n, grid.n))
    coeffs = np.ascontiguousarray(bspline_prefilter(grid, fields))

    print(f"active backend: {_kernels.BACKEND}")
    print(f"{'particles':>10} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for m in (16, 32, 64, 128, 256):
        pts = rng.uniform(0.0, 64.0, size=(2, m * m))
        px, py = np.ascontiguousarray(pts[0]), np.ascontiguousarray(pts[1])
        t_np = time_call(_kernels.sample_bspline_numpy, coeffs, px, py)
        row = f"{m * m:>10} {t_np * 1e3:>12.3f}"
        if _kernels.BACKEND == "numba":
            t_nb = time_call(_kernels.sample_bspline, coeffs, px, py)
            row += f" {t_nb * 1e3:>12.3f} {t_np / t_nb:>8.1f}x"
        else:
            row += f" {'-':>12} {'-':>9}"
        print(row)


if __name__ == "__main__":
    main()
