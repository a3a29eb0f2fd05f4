"""Periodic grid on the flat 2-torus [0, 2pi)^2 with wavenumber tables.

Physical fields are real arrays indexed [i, j] with node (i, j) at
(2*pi*i/n, 2*pi*j/n); spectral fields are the complex fft2 coefficients in
numpy's standard layout.  All differential operators in this package share
the derivative wavenumber tables built here, so identities like
div(grad(f)) == laplacian(f) hold coefficient-wise, not just approximately.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi


class Grid:
    """n x n periodic grid; immutable after construction.

    The Nyquist column/row is zeroed in the derivative tables ``kx``/``ky``
    (odd derivatives of a real field have no consistent Nyquist phase), and
    ``k2 = kx**2 + ky**2`` is built from those same tables.  ``k2_full``
    keeps the true |k|^2 including Nyquist and backs the Sobolev weights.
    Everything the package produces is band-limited by the 2/3 rule, where
    the two conventions agree exactly.
    """

    def __init__(self, n: int):
        if n < 8 or n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 8, got n={n}")
        self.n = int(n)
        self.length = TWO_PI
        self.spacing = TWO_PI / n

        k = np.fft.fftfreq(n, 1.0 / n)  # integer wavenumbers, Nyquist = -n/2
        kd = k.copy()
        kd[n // 2] = 0.0  # no odd-derivative at Nyquist
        self.kx = kd[:, None] * np.ones((1, n))
        self.ky = np.ones((n, 1)) * kd[None, :]
        self.k2 = self.kx**2 + self.ky**2
        self.k2_full = (k**2)[:, None] + (k**2)[None, :]

        # 2/3-rule mask for quadratic products
        self.kmax = n // 3
        ka = np.abs(k)
        self.dealias_mask = (ka[:, None] <= self.kmax) & (ka[None, :] <= self.kmax)

        coords = TWO_PI * np.arange(n) / n
        self.x = coords[:, None] * np.ones((1, n))
        self.y = np.ones((n, 1)) * coords[None, :]

        # guard against division by zero at the mean mode (and Nyquist lines,
        # which the derivative tables annihilate anyway)
        self._k2_safe = np.where(self.k2 == 0.0, 1.0, self.k2)
        self._zero_k2 = self.k2 == 0.0

    def __repr__(self):
        return f"Grid(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self):
        return hash(("Grid", self.n))

    def nodes(self) -> np.ndarray:
        """All grid nodes as an (n, n, 2) array."""
        return np.stack([self.x, self.y], axis=-1)


@lru_cache(maxsize=32)
def make_grid(n: int) -> Grid:
    """Shared Grid instances; the tables are read-only after construction."""
    return Grid(n)
