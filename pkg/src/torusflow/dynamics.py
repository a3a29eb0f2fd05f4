"""Right-hand sides for 2D incompressible Euler and Euler-alpha evolution.

Velocity form:
    Euler:        du/dt = -P[(u . grad) u]
    Euler-alpha:  du/dt = P[nu (1 - alpha lap)^-1 lap u - (u . grad) u - U(u)]
with P the Leray projection (the Stokes projector of the alpha-model reduces
to it on the flat torus).  U is the quadratic operator

    U(u) = alpha * (1 + alpha*(|k|^2 I + k k^t))^-1 {
              div[grad u . grad u^t + grad u . grad u - grad u^t . grad u]
              + grad Tr(grad u . grad u) }

whose alpha factor makes the alpha-general model consistent with the
transported-momentum form (it is invisible at alpha = 1).  Transport forms:
    Euler vorticity:      dw/dt = -u . grad w
    potential vorticity:  dq/dt = -u . grad q + nu lap w,   q = (1 - alpha lap) w
Every quadratic product is 2/3-rule dealiased, so both forms generate the
same band-limited semidiscrete dynamics (tested to roundoff).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .spectral import (
    curl2d,
    dealias,
    grad_vector,
    helmholtz_full_inv,
    helmholtz_inv,
    inv_laplacian,
    leray_project,
    max_abs,
    require_divergence_free,
    to_physical,
    to_spectral,
    velocity_from_vorticity,
)

EULER = "euler"
EULER_ALPHA = "euler_alpha"


@dataclass(frozen=True)
class ModelParams:
    """Which model to run and its coefficients; euler is inviscid by definition."""

    model: str = EULER
    alpha: float = 1.0
    nu: float = 0.0

    def __post_init__(self):
        if self.model not in (EULER, EULER_ALPHA):
            raise ValueError(f"model must be '{EULER}' or '{EULER_ALPHA}', got {self.model!r}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")
        if self.model == EULER and self.nu != 0.0:
            raise ValueError("euler model is inviscid; nu must be 0")
        if self.model == EULER_ALPHA and self.alpha <= 0:
            raise ValueError(f"alpha must be positive for euler_alpha, got {self.alpha}")


def _advection(grid: Grid, uh: np.ndarray) -> np.ndarray:
    """(u . grad) u, dealiased, spectral."""
    gh = grad_vector(grid, uh)
    u = to_physical(grid, uh)
    g = to_physical(grid, gh)
    adv = np.einsum("jxy,ijxy->ixy", u, g)
    return dealias(grid, to_spectral(grid, adv))


def pressure_gradient(grid: Grid, u: np.ndarray) -> np.ndarray:
    """grad inv_lap Tr(grad u . grad u); the gradient part of the self-advection."""
    uh = to_spectral(grid, u)
    require_divergence_free(grid, uh)
    g = to_physical(grid, grad_vector(grid, uh))
    tr = np.einsum("ikxy,kixy->xy", g, g)
    trh = dealias(grid, to_spectral(grid, tr))
    psi = inv_laplacian(grid, trh)
    return np.stack([1j * grid.kx * psi, 1j * grid.ky * psi])


def euler_rhs(grid: Grid, u: np.ndarray) -> np.ndarray:
    """du/dt for incompressible Euler, spectral in and out."""
    uh = to_spectral(grid, u)
    require_divergence_free(grid, uh)
    return -leray_project(grid, _advection(grid, uh))


def vorticity_rhs(grid: Grid, w: np.ndarray, u: np.ndarray) -> np.ndarray:
    """dw/dt = -u . grad w for 2D Euler; (w, u) must be a consistent pair."""
    wh = to_spectral(grid, w)
    uh = to_spectral(grid, u)
    if max_abs(grid, curl2d(grid, uh) - wh) > 1e-8:
        raise ValueError("vorticity field is not the curl of the velocity field")
    out = -_transport(grid, wh, uh)
    out[0, 0] = 0.0
    return out


def _transport(grid: Grid, fh: np.ndarray, uh: np.ndarray) -> np.ndarray:
    """u . grad f for a scalar f, dealiased, spectral."""
    fx = to_physical(grid, 1j * grid.kx * fh)
    fy = to_physical(grid, 1j * grid.ky * fh)
    u = to_physical(grid, uh)
    return dealias(grid, to_spectral(grid, u[0] * fx + u[1] * fy))


def calU(grid: Grid, u: np.ndarray, alpha: float) -> np.ndarray:
    """The quadratic Helmholtz-filtered operator of the alpha-model (see module docs)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    uh = to_spectral(grid, u)
    require_divergence_free(grid, uh)
    g = to_physical(grid, grad_vector(grid, uh))
    # bracket M = g g^t + g g - g^t g, with (g)_ij = d u_i / d x_j
    m = (
        np.einsum("ikxy,jkxy->ijxy", g, g)
        + np.einsum("ikxy,kjxy->ijxy", g, g)
        - np.einsum("kixy,kjxy->ijxy", g, g)
    )
    tr = np.einsum("ikxy,kixy->xy", g, g)
    mh = dealias(grid, to_spectral(grid, m))
    trh = dealias(grid, to_spectral(grid, tr))
    ik = np.stack([1j * grid.kx, 1j * grid.ky])
    div_m = np.einsum("jxy,ijxy->ixy", ik, mh)
    numerator = alpha * (div_m + ik * trh)
    return helmholtz_full_inv(grid, numerator, alpha)


def euler_alpha_rhs(grid: Grid, u: np.ndarray, params: ModelParams) -> np.ndarray:
    """du/dt for the alpha-model, spectral in and out."""
    if params.model != EULER_ALPHA:
        raise ValueError("euler_alpha_rhs requires model='euler_alpha'")
    uh = to_spectral(grid, u)
    require_divergence_free(grid, uh)
    rhs = -_advection(grid, uh) - calU(grid, uh, params.alpha)
    if params.nu != 0.0:
        rhs = rhs + params.nu * (-grid.k2 / (1.0 + params.alpha * grid.k2)) * uh
    return leray_project(grid, rhs)


def potential_vorticity(grid: Grid, u: np.ndarray, alpha: float) -> np.ndarray:
    """q = curl((1 - alpha lap) u), spectral scalar."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    uh = to_spectral(grid, u)
    return (1.0 + alpha * grid.k2) * curl2d(grid, uh)


def velocity_from_q(grid: Grid, q: np.ndarray, alpha: float) -> np.ndarray:
    """Invert q -> w -> u; q is taken zero-mean (mean mode dropped)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    qh = to_spectral(grid, q).copy()
    qh[0, 0] = 0.0
    wh = qh / (1.0 + alpha * grid.k2)
    return velocity_from_vorticity(grid, wh)


def q_transport_rhs(grid: Grid, q: np.ndarray, u: np.ndarray, nu: float, alpha: float) -> np.ndarray:
    """dq/dt = -u . grad q + nu lap w with w = (1 - alpha lap)^-1 q."""
    qh = to_spectral(grid, q)
    uh = to_spectral(grid, u)
    out = -_transport(grid, qh, uh)
    if nu != 0.0:
        wh = helmholtz_inv(grid, qh, alpha)
        out = out + nu * (-grid.k2) * wh
    out[0, 0] = 0.0
    return out
