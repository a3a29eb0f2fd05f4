import numpy as np
import pytest

from torusflow.grid import make_grid
from torusflow.spectral import to_spectral, velocity_from_vorticity


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


@pytest.fixture(scope="session")
def grid8():
    return make_grid(8)


def random_scalar(grid, seed, kmax=None):
    """Random band-limited scalar field (physical), zero mean."""
    kmax = grid.kmax if kmax is None else min(kmax, grid.kmax)
    rng = np.random.default_rng(seed)
    f = np.zeros((grid.n, grid.n))
    for k1 in range(-kmax, kmax + 1):
        for k2 in range(-kmax, kmax + 1):
            if (k1, k2) <= (0, 0):
                continue
            f += rng.normal() / (1.0 + k1 * k1 + k2 * k2) * np.cos(
                k1 * grid.x + k2 * grid.y + rng.uniform(0, 2 * np.pi)
            )
    return f


def random_velocity(grid, seed, kmax=None):
    """Random band-limited divergence-free velocity (spectral)."""
    w = random_scalar(grid, seed, kmax)
    return velocity_from_vorticity(grid, to_spectral(grid, w))
