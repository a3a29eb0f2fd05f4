"""torusflow: pseudo-spectral 2D Euler / Euler-alpha dynamics with Lagrangian
flow-map tracking, conservation monitoring, and convergence experiments on
the periodic torus."""

__version__ = "0.1.0"

from .dynamics import EULER, EULER_ALPHA, ModelParams
from .grid import Grid, make_grid
from .ic import ICSpec, build_ic
from .simulate import SimConfig, SimState, run, sensitivity, step, viscosity_sweep

__all__ = [
    "EULER",
    "EULER_ALPHA",
    "Grid",
    "ICSpec",
    "ModelParams",
    "SimConfig",
    "SimState",
    "build_ic",
    "make_grid",
    "run",
    "sensitivity",
    "step",
    "viscosity_sweep",
    "__version__",
]
