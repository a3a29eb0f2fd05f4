"""Executable invariant suite behind the `torusflow verify` subcommand.

Each check returns its worst measured deviation and the tolerance it must
beat; the CLI renders one row per check and fails the process if any row
fails.  The suite is sized to finish in well under five minutes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, replace

import numpy as np

from . import dynamics as dyn
from . import spectral as sp
from .configio import config_from_text, parse_config, serialize_config
from .diagnostics import assert_conservation
from .flowmap import (
    StageVelocity,
    flow_rhs,
    init_flow_map,
    inverse_defect,
    step_flow,
    volume_defect,
)
from .grid import TWO_PI, make_grid
from .ic import ICSpec, build_ic, shear, taylor_green
from .interpolate import interpolate, trig_interpolate
from .simulate import SimConfig, run


@dataclass
class CheckResult:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.tolerance


def _random_velocity(grid, rng):
    w = np.zeros((grid.n, grid.n))
    kmax = min(8, grid.kmax)
    for k1 in range(-kmax, kmax + 1):
        for k2 in range(-kmax, kmax + 1):
            if (k1, k2) <= (0, 0) or k1 * k1 + k2 * k2 > kmax * kmax:
                continue
            w += rng.normal() * (1.0 + k1 * k1 + k2 * k2) ** -1.5 * np.cos(
                k1 * grid.x + k2 * grid.y + rng.uniform(0, TWO_PI)
            )
    return sp.velocity_from_vorticity(grid, w)


def spectral_identity_suite(n: int = 64, trials: int = 100, seed: int = 2024):
    """Operator identities on random fields; the acceptance gate runs this
    with 100 trials at tolerance 1e-11."""
    grid = make_grid(n)
    rng = np.random.default_rng(seed)
    worst = {
        "fft round trip": 0.0,
        "div(grad) vs laplacian": 0.0,
        "curl(grad) = 0": 0.0,
        "leray idempotent": 0.0,
        "leray self-adjoint": 0.0,
        "leray output div-free": 0.0,
        "helmholtz_inv left-inverse": 0.0,
        "helmholtz/leray commute": 0.0,
        "sobolev monotone in s": 0.0,
        "interpolation node-exact": 0.0,
    }
    nodes = grid.nodes().reshape(-1, 2)
    node_subset = nodes[rng.integers(0, nodes.shape[0], size=16)]
    for _ in range(trials):
        f = rng.standard_normal((n, n))
        fh = sp.to_spectral(grid, f)
        worst["fft round trip"] = max(
            worst["fft round trip"], float(np.max(np.abs(sp.to_physical(grid, fh) - f)))
        )
        smooth = sp.to_physical(grid, sp.dealias(grid, fh))
        sh = sp.to_spectral(grid, smooth)
        # coefficient-wise identities, reported in field units (fft
        # coefficients carry an n^2 scale)
        worst["div(grad) vs laplacian"] = max(
            worst["div(grad) vs laplacian"],
            float(np.max(np.abs(sp.div(grid, sp.grad(grid, sh)) - sp.laplacian(grid, sh)))) / n**2,
        )
        worst["curl(grad) = 0"] = max(
            worst["curl(grad) = 0"],
            float(np.max(np.abs(sp.curl2d(grid, sp.grad(grid, sh))))) / n**2,
        )
        u = np.stack([rng.standard_normal((n, n)), rng.standard_normal((n, n))])
        uh = sp.to_spectral(grid, u)
        p1 = sp.leray_project(grid, uh)
        p2 = sp.leray_project(grid, p1)
        worst["leray idempotent"] = max(worst["leray idempotent"], sp.max_abs(grid, p2 - p1))
        worst["leray output div-free"] = max(
            worst["leray output div-free"], sp.max_abs(grid, sp.div(grid, p1))
        )
        v = np.stack([rng.standard_normal((n, n)), rng.standard_normal((n, n))])
        vh = sp.to_spectral(grid, v)
        lhs = np.sum(sp.to_physical(grid, p1) * v)
        rhs = np.sum(u * sp.to_physical(grid, sp.leray_project(grid, vh)))
        worst["leray self-adjoint"] = max(
            worst["leray self-adjoint"], abs(lhs - rhs) * grid.spacing**2
        )
        alpha = float(rng.uniform(0.2, 2.0))
        hi = sp.helmholtz_inv(grid, fh, alpha)
        worst["helmholtz_inv left-inverse"] = max(
            worst["helmholtz_inv left-inverse"],
            sp.max_abs(grid, hi - alpha * sp.laplacian(grid, hi) - fh),
        )
        worst["helmholtz/leray commute"] = max(
            worst["helmholtz/leray commute"],
            sp.max_abs(
                grid,
                sp.helmholtz_inv(grid, sp.leray_project(grid, uh), alpha)
                - sp.leray_project(grid, sp.helmholtz_inv(grid, uh, alpha)),
            ),
        )
        s1, s2 = sorted(rng.uniform(0.0, 4.0, size=2))
        worst["sobolev monotone in s"] = max(
            worst["sobolev monotone in s"],
            max(0.0, sp.sobolev_norm(grid, fh, s1) - sp.sobolev_norm(grid, fh, s2)),
        )
        worst["interpolation node-exact"] = max(
            worst["interpolation node-exact"],
            float(
                np.max(
                    np.abs(
                        interpolate(grid, smooth, node_subset)
                        - trig_interpolate(grid, smooth, node_subset)
                    )
                )
            ),
        )
    return [CheckResult(k, v, 1e-11) for k, v in worst.items()]


def dynamics_checks(n: int = 64, seed: int = 7):
    grid = make_grid(n)
    results = []
    tg = taylor_green(grid)
    sh = shear(grid)
    results.append(CheckResult("euler steady: taylor-green", sp.max_abs(grid, dyn.euler_rhs(grid, tg)), 1e-11))
    results.append(CheckResult("euler steady: shear", sp.max_abs(grid, dyn.euler_rhs(grid, sh)), 1e-11))
    palpha = dyn.ModelParams(model=dyn.EULER_ALPHA, alpha=1.0, nu=0.0)
    results.append(
        CheckResult("euler-alpha steady: shear", sp.max_abs(grid, dyn.euler_alpha_rhs(grid, sh, palpha)), 1e-11)
    )
    u = build_ic(ICSpec(kind="random", seed=seed), grid, dyn.ModelParams())
    adv = dyn.pressure_gradient(grid, u)
    tr_vs_div = sp.max_abs(grid, adv - (dyn._advection(grid, u) - sp.leray_project(grid, dyn._advection(grid, u))))
    results.append(CheckResult("trace identity Tr(gu.gu) = div(adv)", tr_vs_div, 1e-10))
    rhs = dyn.euler_rhs(grid, u)
    orth = abs(np.sum(sp.to_physical(grid, u) * sp.to_physical(grid, rhs))) * grid.spacing**2
    results.append(CheckResult("euler rhs L2-orthogonal to u", orth, 1e-10))
    results.append(
        CheckResult("euler rhs quadratic scaling", sp.max_abs(grid, dyn.euler_rhs(grid, 1.7 * u) - 1.7**2 * rhs), 1e-11)
    )
    wh = sp.curl2d(grid, u)
    results.append(
        CheckResult("vorticity rhs = curl(euler rhs)", sp.max_abs(grid, dyn.vorticity_rhs(grid, wh, u) - sp.curl2d(grid, rhs)), 1e-10)
    )
    for alpha, nu in ((1.0, 0.0), (0.7, 1e-3)):
        p = dyn.ModelParams(model=dyn.EULER_ALPHA, alpha=alpha, nu=nu)
        lhs = (1.0 + alpha * grid.k2) * sp.curl2d(grid, dyn.euler_alpha_rhs(grid, u, p))
        qh = dyn.potential_vorticity(grid, u, alpha)
        qrhs = dyn.q_transport_rhs(grid, qh, u, nu, alpha)
        results.append(
            CheckResult(f"q-form chain rule (alpha={alpha}, nu={nu})", sp.max_abs(grid, lhs - qrhs), 1e-9)
        )
        results.append(
            CheckResult(
                f"q-transport zero mean (alpha={alpha}, nu={nu})",
                abs(sp.mean_value(grid, qrhs)),
                1e-12,
            )
        )
    q = dyn.potential_vorticity(grid, u, 0.7)
    results.append(
        CheckResult("q inversion round trip", sp.max_abs(grid, dyn.velocity_from_q(grid, q, 0.7) - u), 1e-11)
    )
    return results


def flowmap_checks(n: int = 64, m: int = 32):
    grid = make_grid(n)
    results = []
    u_sh = np.stack([np.sin(grid.y), np.zeros((n, n))])
    stage = StageVelocity(grid, u_sh)
    fm = init_flow_map(m)
    dt = 1e-3
    for _ in range(500):
        fm = step_flow(fm, [stage] * 4, dt)
    t = 0.5
    lattice = init_flow_map(m).eta
    eta_exact = lattice.copy()
    eta_exact[..., 0] += t * np.sin(lattice[..., 1])
    results.append(CheckResult("shear flow: eta closed form", float(np.max(np.abs(fm.eta - eta_exact))), 1e-8))
    t_exact = np.zeros((m, m, 2, 2))
    t_exact[..., 0, 0] = t_exact[..., 1, 1] = 1.0
    t_exact[..., 0, 1] = t * np.cos(lattice[..., 1])
    results.append(CheckResult("shear flow: tangent closed form", float(np.max(np.abs(fm.tangent - t_exact))), 1e-8))
    results.append(CheckResult("shear flow: volume defect", volume_defect(fm), 1e-10))
    results.append(CheckResult("shear flow: inverse defect", inverse_defect(fm), 1e-10))
    results.append(
        CheckResult("shear flow: x2 frozen", float(np.max(np.abs(fm.eta[..., 1] - lattice[..., 1]))), 1e-12)
    )
    # product rule: d(Tinv T)/dt = 0 pointwise
    rng = np.random.default_rng(5)
    u = sp.to_physical(grid, _random_velocity(grid, rng))
    stage_r = StageVelocity(grid, u)
    fm2 = init_flow_map(m)
    for _ in range(50):
        fm2 = step_flow(fm2, [stage_r] * 4, dt)
    d_eta, d_t, d_tinv = flow_rhs(fm2, stage_r)
    prod = np.einsum("pqij,pqjk->pqik", d_tinv, fm2.tangent) + np.einsum(
        "pqij,pqjk->pqik", fm2.tangent_inv, d_t
    )
    results.append(CheckResult("product rule d(Tinv T)/dt = 0", float(np.max(np.abs(prod))), 1e-12))
    # forward then reversed integration returns the lattice
    tg = np.stack([np.sin(grid.x) * np.cos(grid.y), -np.cos(grid.x) * np.sin(grid.y)])
    fwd = StageVelocity(grid, tg)
    bwd = StageVelocity(grid, -tg)
    fm3 = init_flow_map(m)
    for _ in range(250):
        fm3 = step_flow(fm3, [fwd] * 4, dt)
    for _ in range(250):
        fm3 = step_flow(fm3, [bwd] * 4, dt)
    results.append(
        CheckResult("forward/backward recovers identity", float(np.max(np.abs(fm3.eta - lattice))), 1e-6)
    )
    return results


def simulation_checks():
    results = []
    cfg = SimConfig(t_end=0.2, params=dyn.ModelParams(), ic=ICSpec(kind="taylor_green"), sample_every=50)
    state, recs, _ = run(cfg)
    u0 = build_ic(cfg.ic, state.grid, cfg.params)
    results.append(CheckResult("taylor-green run: velocity frozen", sp.max_abs(state.grid, state.u - u0), 1e-11))
    report = assert_conservation(recs, "euler", 0.0)
    worst = max(r.drift for r in report.rows)
    results.append(CheckResult("taylor-green run: conservation drifts", worst, 1e-10))
    results.append(CheckResult("taylor-green run: volume defect", volume_defect(state.fm), 1e-10))
    cfg2 = SimConfig(
        t_end=0.1,
        params=dyn.ModelParams(model=dyn.EULER_ALPHA, alpha=1.0, nu=0.0),
        ic=ICSpec(kind="random", seed=11),
        sample_every=25,
    )
    state2, recs2, _ = run(cfg2)
    report2 = assert_conservation(recs2, dyn.EULER_ALPHA, 0.0, {"q_l2": 1e-8, "q_max": 1e-7})
    worst2 = max(r.drift for r in report2.rows)
    results.append(CheckResult("alpha run: q conservation drifts", worst2, 1e-7))
    results.append(
        CheckResult("run determinism", _determinism_deviation(cfg2), 0.0)
    )
    cfg_text = serialize_config(cfg2)
    results.append(
        CheckResult(
            "config round trip",
            0.0 if config_from_text(serialize_config(config_from_text(cfg_text))) == config_from_text(cfg_text) else 1.0,
            0.0,
        )
    )
    return results


def _determinism_deviation(cfg) -> float:
    from .diagnostics import records_to_csv

    _, recs_a, _ = run(cfg)
    _, recs_b, _ = run(cfg)
    return 0.0 if records_to_csv(recs_a) == records_to_csv(recs_b) else 1.0


def run_all():
    checks = []
    checks += spectral_identity_suite()
    checks += dynamics_checks()
    checks += flowmap_checks()
    checks += simulation_checks()
    return checks


def render_report(checks) -> str:
    buf = io.StringIO()
    width = max(len(c.name) for c in checks) + 2
    buf.write(f"{'check':<{width}} {'measured':>12} {'tolerance':>12}  verdict\n")
    for c in checks:
        verdict = "pass" if c.passed else "FAIL"
        buf.write(f"{c.name:<{width}} {c.measured:>12.3e} {c.tolerance:>12.1e}  {verdict}\n")
    n_fail = sum(not c.passed for c in checks)
    buf.write(f"\n{len(checks) - n_fail}/{len(checks)} checks passed\n")
    return buf.getvalue()
