"""Hot kernels for particle interpolation: numba when available, numpy otherwise.

Set TORUSFLOW_NUMBA=0 to force the pure-numpy path (same results, slower at
large particle counts).  Both paths evaluate periodic cubic B-splines from
prefiltered coefficient stacks; benchmarks/bench_interp.py compares them.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("TORUSFLOW_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


def _bspline_weights(s: np.ndarray):
    # uniform cubic B-spline basis on the 4-point stencil [base-1 .. base+2]
    s2 = s * s
    s3 = s2 * s
    w0 = (1.0 - 3.0 * s + 3.0 * s2 - s3) / 6.0
    w1 = (4.0 - 6.0 * s2 + 3.0 * s3) / 6.0
    w2 = (1.0 + 3.0 * s + 3.0 * s2 - 3.0 * s3) / 6.0
    w3 = s3 / 6.0
    return w0, w1, w2, w3


def sample_bspline_numpy(coeffs: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Evaluate nf B-spline surfaces at scattered points.

    coeffs: (nf, n, n) prefiltered coefficients; px, py: point coordinates in
    grid units (position / spacing), any real value (wrapped periodically).
    Returns (nf, npts).
    """
    n = coeffs.shape[1]
    bx = np.floor(px)
    by = np.floor(py)
    sx = px - bx
    sy = py - by
    ix = bx.astype(np.int64)
    iy = by.astype(np.int64)
    wx = np.stack(_bspline_weights(sx))  # (4, npts)
    wy = np.stack(_bspline_weights(sy))
    out = np.zeros((coeffs.shape[0], px.shape[0]))
    for a in range(4):
        ia = (ix + (a - 1)) % n
        for b in range(4):
            jb = (iy + (b - 1)) % n
            out += (wx[a] * wy[b]) * coeffs[:, ia, jb]
    return out


try:
    if not _numba_requested():
        raise ImportError("numba disabled via TORUSFLOW_NUMBA")
    from numba import njit

    @njit(cache=True)
    def _sample_bspline_numba(coeffs, px, py):  # pragma: no cover - jitted
        nf = coeffs.shape[0]
        n = coeffs.shape[1]
        npts = px.shape[0]
        out = np.zeros((nf, npts))
        for p in range(npts):
            bx = np.floor(px[p])
            by = np.floor(py[p])
            sx = px[p] - bx
            sy = py[p] - by
            ix = int(bx)
            iy = int(by)
            sx2 = sx * sx
            sx3 = sx2 * sx
            wx0 = (1.0 - 3.0 * sx + 3.0 * sx2 - sx3) / 6.0
            wx1 = (4.0 - 6.0 * sx2 + 3.0 * sx3) / 6.0
            wx2 = (1.0 + 3.0 * sx + 3.0 * sx2 - 3.0 * sx3) / 6.0
            wx3 = sx3 / 6.0
            sy2 = sy * sy
            sy3 = sy2 * sy
            wy0 = (1.0 - 3.0 * sy + 3.0 * sy2 - sy3) / 6.0
            wy1 = (4.0 - 6.0 * sy2 + 3.0 * sy3) / 6.0
            wy2 = (1.0 + 3.0 * sy + 3.0 * sy2 - 3.0 * sy3) / 6.0
            wy3 = sy3 / 6.0
            i0 = (ix - 1) % n
            i1 = ix % n
            i2 = (ix + 1) % n
            i3 = (ix + 2) % n
            j0 = (iy - 1) % n
            j1 = iy % n
            j2 = (iy + 1) % n
            j3 = (iy + 2) % n
            for f in range(nf):
                c = coeffs[f]
                row0 = wy0 * c[i0, j0] + wy1 * c[i0, j1] + wy2 * c[i0, j2] + wy3 * c[i0, j3]
                row1 = wy0 * c[i1, j0] + wy1 * c[i1, j1] + wy2 * c[i1, j2] + wy3 * c[i1, j3]
                row2 = wy0 * c[i2, j0] + wy1 * c[i2, j1] + wy2 * c[i2, j2] + wy3 * c[i2, j3]
                row3 = wy0 * c[i3, j0] + wy1 * c[i3, j1] + wy2 * c[i3, j2] + wy3 * c[i3, j3]
                out[f, p] = wx0 * row0 + wx1 * row1 + wx2 * row2 + wx3 * row3
        return out

    sample_bspline = _sample_bspline_numba
    BACKEND = "numba"
except ImportError:
    sample_bspline = sample_bspline_numpy
    BACKEND = "numpy"
