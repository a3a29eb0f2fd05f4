"""Coupled Eulerian/Lagrangian time integration and the headline experiments.

One fixed-step RK4 advances the velocity field spectrally and feeds its
stage values to the particle integrator as the stage velocities, so the
coupled (u, eta, T, Tinv) system is globally fourth order.  Fixed steps are
deliberate: the sweep and sensitivity experiments compare trajectories
across runs and must not see step-size noise.  Particles are passive; the
field never feels them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import DiagnosticsRecord, sample
from .dynamics import (
    EULER,
    EULER_ALPHA,
    ModelParams,
    euler_alpha_rhs,
    euler_rhs,
    potential_vorticity,
    q_transport_rhs,
    velocity_from_q,
)
from .flowmap import FlowMap, StageVelocity, init_flow_map, kahan_add, step_flow
from .grid import TWO_PI, Grid, make_grid
from .ic import ICSpec, build_ic
from .spectral import l2_norm, leray_project, max_abs, to_physical, to_spectral


class SimulationAborted(RuntimeError):
    """Raised when a non-finite value appears in any integrator stage."""

    def __init__(self, message, t=None, step=None):
        super().__init__(message)
        self.t = t
        self.step = step


@dataclass
class SimState:
    t: float
    u: np.ndarray  # spectral velocity (2, n, n)
    fm: FlowMap
    params: ModelParams
    grid: Grid
    u_comp: np.ndarray | None = None  # Kahan compensation of the u accumulator


@dataclass(frozen=True)
class SimConfig:
    n: int = 64
    m: int = 32
    dt: float = 1e-3
    t_end: float = 1.0
    params: ModelParams = field(default_factory=ModelParams)
    ic: ICSpec = field(default_factory=ICSpec)
    s: float = 2.5
    sample_every: int = 100
    snapshot_every: int = 0
    out_dir: str = "out"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.sample_every < 1:
            raise ValueError(f"sample_every must be >= 1, got {self.sample_every}")
        if self.snapshot_every < 0:
            raise ValueError(f"snapshot_every must be >= 0, got {self.snapshot_every}")


def _rhs(state: SimState):
    if state.params.model == EULER:
        return lambda uh: euler_rhs(state.grid, uh)
    return lambda uh: euler_alpha_rhs(state.grid, uh, state.params)


def initial_state(config: SimConfig) -> SimState:
    grid = make_grid(config.n)
    uh = build_ic(config.ic, grid, config.params)
    cfl = config.dt * max_abs(grid, uh) * config.n / TWO_PI
    if cfl > 0.5:
        warnings.warn(f"CFL number {cfl:.3f} exceeds 0.5; the run may be inaccurate", stacklevel=2)
    return SimState(t=0.0, u=uh, fm=init_flow_map(config.m), params=config.params, grid=grid)


def step(state: SimState, dt: float) -> SimState:
    """One RK4 step of the coupled system; field stage values drive the particles."""
    rhs = _rhs(state)
    g = state.grid
    u0 = state.u

    def guard(arr, label):
        if not np.all(np.isfinite(arr)):
            raise SimulationAborted(f"non-finite {label} at t={state.t:.6g}", t=state.t)
        return arr

    def stage_rhs(uh, label):
        try:
            return guard(rhs(uh), label)
        except (ValueError, FloatingPointError) as exc:
            if "non-finite" in str(exc):
                raise SimulationAborted(f"{exc} ({label}, t={state.t:.6g})", t=state.t) from exc
            raise

    s1 = guard(u0, "state velocity")
    k1 = stage_rhs(s1, "stage-1 rhs")
    s2 = u0 + 0.5 * dt * k1
    k2 = stage_rhs(s2, "stage-2 rhs")
    s3 = u0 + 0.5 * dt * k2
    k3 = stage_rhs(s3, "stage-3 rhs")
    s4 = u0 + dt * k3
    k4 = stage_rhs(s4, "stage-4 rhs")
    # the roundoff divergence of the combined increment is absorbed here;
    # the state itself is accumulated with compensation so that 10^3-step
    # runs keep sub-ulp-per-step roundoff (the sensitivity studies need it)
    inc = leray_project(g, (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    comp = state.u_comp if state.u_comp is not None else np.zeros_like(u0)
    u1, comp1 = kahan_add(u0, inc, comp)
    guard(u1, "velocity")

    stages = [StageVelocity(g, s) for s in (s1, s2, s3, s4)]
    fm1 = step_flow(state.fm, stages, dt)
    guard(fm1.eta, "particle positions")
    return SimState(t=state.t + dt, u=u1, fm=fm1, params=state.params, grid=g,
                    u_comp=comp1)


def run(config: SimConfig, on_sample=None):
    """Advance to t_end; returns (final state, diagnostics records, snapshot times).

    on_sample, when given, is called with (state,) at every diagnostics
    sample; snapshot handling lives in the CLI layer.
    """
    state = initial_state(config)
    nsteps = int(round(config.t_end / config.dt))
    if abs(nsteps * config.dt - config.t_end) > 1e-9 * max(1.0, config.t_end):
        raise ValueError(f"t_end={config.t_end} is not an integer multiple of dt={config.dt}")
    records = [sample(state.grid, state.u, state.fm, state.params, config.s, state.t)]
    if on_sample:
        on_sample(state)
    snapshot_times = [state.t]
    for i in range(1, nsteps + 1):
        try:
            state = step(state, config.dt)
        except SimulationAborted as exc:
            exc.step = i
            raise
        if i % config.sample_every == 0 or i == nsteps:
            records.append(sample(state.grid, state.u, state.fm, state.params, config.s, state.t))
            if on_sample:
                on_sample(state)
        if config.snapshot_every and (i % config.snapshot_every == 0):
            snapshot_times.append(state.t)
    return state, records, snapshot_times


def torus_particle_distance(eta_a: np.ndarray, eta_b: np.ndarray) -> float:
    """Sup over particles of the periodic distance between two position sets."""
    diff = eta_a - eta_b
    diff = (diff + np.pi) % TWO_PI - np.pi
    return float(np.max(np.sqrt(np.sum(diff**2, axis=-1))))


def velocity_l2_distance(grid: Grid, ua, ub) -> float:
    return l2_norm(grid, to_spectral(grid, ua) - to_spectral(grid, ub))


@dataclass
class SweepRow:
    nu: float
    eta_sup: float
    u_l2: float


def viscosity_sweep(config: SimConfig, nu_list) -> list:
    """Distance of each viscous run from the shared inviscid reference at t_end.

    All runs reuse the same initial velocity, grid, dt and particle lattice;
    nu_list must be positive and sorted descending (nu=0 is the reference).
    """
    nus = [float(v) for v in nu_list]
    if config.params.model != EULER_ALPHA:
        raise ValueError("viscosity sweep requires model='euler_alpha'")
    if not nus or any(v <= 0 for v in nus):
        raise ValueError("nu_list must contain only positive viscosities (nu=0 is the reference)")
    if sorted(nus, reverse=True) != nus:
        raise ValueError("nu_list must be sorted descending")

    def final_state(nu):
        params = replace(config.params, nu=nu)
        state, _, _ = run(replace(config, params=params))
        return state

    ref = final_state(0.0)
    rows = []
    for nu in nus:
        viscous = final_state(nu)
        rows.append(
            SweepRow(
                nu=nu,
                eta_sup=torus_particle_distance(viscous.fm.eta, ref.fm.eta),
                u_l2=velocity_l2_distance(ref.grid, viscous.u, ref.u),
            )
        )
    return rows


def fit_loglog_slope(xs, ys) -> float:
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


@dataclass
class SensitivityRow:
    eps: float
    deriv_eta: float  # RMS norm of the eta directional derivative
    deriv_u: float    # grid L2 norm of the u directional derivative
    diff_eta: float | None = None  # ||D(eps) - D(next eps)||
    diff_u: float | None = None
    ratio_eta: float | None = None
    ratio_u: float | None = None


def _rms(arr) -> float:
    return float(np.sqrt(np.mean(np.asarray(arr) ** 2)))


def sensitivity(config: SimConfig, direction: np.ndarray, eps_list, u0=None) -> list:
    """Central-difference directional derivatives of (eta(T), u(T)) in u0.

    direction is a divergence-free spectral field (unit H^s norm by
    convention); eps_list positive descending; u0 overrides the config's
    initial velocity when the experiment wants a rescaled base flow.
    Successive rows carry the Richardson differences and ratios used to
    witness smooth dependence.
    """
    epss = [float(e) for e in eps_list]
    if not epss or any(e <= 0 for e in epss):
        raise ValueError("eps_list must contain positive perturbation sizes")
    if sorted(epss, reverse=True) != epss:
        raise ValueError("eps_list must be sorted descending")
    grid = make_grid(config.n)
    u0 = build_ic(config.ic, grid, config.params) if u0 is None else to_spectral(grid, u0)
    vh = to_spectral(grid, direction)

    def final(uh_init):
        state = SimState(t=0.0, u=uh_init, fm=init_flow_map(config.m),
                         params=config.params, grid=grid)
        nsteps = int(round(config.t_end / config.dt))
        for i in range(nsteps):
            state = step(state, config.dt)
        return state

    rows = []
    derivs = []
    for eps in epss:
        plus = final(u0 + eps * vh)
        minus = final(u0 - eps * vh)
        d_eta = (plus.fm.eta - minus.fm.eta) / (2.0 * eps)
        d_u = (plus.u - minus.u) / (2.0 * eps)
        derivs.append((d_eta, d_u))
        rows.append(SensitivityRow(eps=eps, deriv_eta=_rms(d_eta),
                                   deriv_u=l2_norm(grid, d_u)))
    for i in range(len(rows) - 1):
        rows[i].diff_eta = _rms(derivs[i][0] - derivs[i + 1][0])
        rows[i].diff_u = l2_norm(grid, derivs[i][1] - derivs[i + 1][1])
    for i in range(len(rows) - 2):
        if rows[i + 1].diff_eta:
            rows[i].ratio_eta = rows[i].diff_eta / rows[i + 1].diff_eta
        if rows[i + 1].diff_u:
            rows[i].ratio_u = rows[i].diff_u / rows[i + 1].diff_u
    return rows


def run_q_transport(config: SimConfig, u0=None):
    """Integrate the alpha-model in potential-vorticity transport form.

    Same RK4, same dealiasing; returns the final spectral velocity.  Used to
    check that the velocity form and the q form generate identical dynamics.
    """
    if config.params.model != EULER_ALPHA:
        raise ValueError("q-transport integration requires model='euler_alpha'")
    grid = make_grid(config.n)
    alpha, nu = config.params.alpha, config.params.nu
    uh = build_ic(config.ic, grid, config.params) if u0 is None else to_spectral(grid, u0)
    qh = potential_vorticity(grid, uh, alpha)
    nsteps = int(round(config.t_end / config.dt))

    def rhs(q):
        return q_transport_rhs(grid, q, velocity_from_q(grid, q, alpha), nu, alpha)

    for _ in range(nsteps):
        k1 = rhs(qh)
        k2 = rhs(qh + 0.5 * config.dt * k1)
        k3 = rhs(qh + 0.5 * config.dt * k2)
        k4 = rhs(qh + config.dt * k3)
        qh = qh + (config.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(qh)):
            raise SimulationAborted("non-finite potential vorticity")
    return velocity_from_q(grid, qh, alpha)


def coupled_convergence_orders(config: SimConfig, halvings: int = 3):
    """Self-convergence of the coupled integrator under dt halving.

    Runs at dt, dt/2, ..., measures successive solution differences in a
    joint (u, eta) norm, and returns (orders, fitted slope of log2 diffs).
    """
    dts = [config.dt / 2**i for i in range(halvings + 1)]
    finals = []
    for dt in dts:
        state, _, _ = run(replace(config, dt=dt, sample_every=10**9))
        finals.append(state)
    diffs = []
    for a, b in zip(finals[:-1], finals[1:]):
        du = l2_norm(a.grid, a.u - b.u)
        deta = _rms(a.fm.eta - b.fm.eta)
        diffs.append(np.hypot(du, deta))
    orders = [float(np.log2(diffs[i] / diffs[i + 1])) for i in range(len(diffs) - 1)]
    slope = -float(np.polyfit(np.arange(len(diffs)), np.log2(diffs), 1)[0])
    return orders, slope
