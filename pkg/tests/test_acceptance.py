"""Acceptance suite: every gate criterion at its stated tolerance.

Defaults unless a criterion states otherwise: n=64 grid, m=32 particle
lattice, T=1, dt=1e-3.  Each test prints one verdict line (run with -s to
see them on success).  This module is self-contained given the package;
the plotting frontend is not imported anywhere here.
"""

import subprocess
import sys

import numpy as np
import pytest

from torusflow import spectral as sp
from torusflow.diagnostics import assert_conservation
from torusflow.dynamics import ModelParams
from torusflow.flowmap import init_flow_map, inverse_defect, volume_defect
from torusflow.ic import ICSpec, build_ic
from torusflow.simulate import (
    SimConfig,
    coupled_convergence_orders,
    fit_loglog_slope,
    run,
    run_q_transport,
    sensitivity,
    viscosity_sweep,
)

RANDOM_IC = ICSpec(kind="random", seed=7, decay=4.0, cutoff=8)


def verdict(ok, label, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    print(line)
    assert ok, line


def tg_config(**kw):
    return SimConfig(t_end=1.0, params=ModelParams(), ic=ICSpec(kind="taylor_green"), **kw)


@pytest.fixture(scope="module")
def euler_tg_run():
    cfg = tg_config(sample_every=100)
    state, records, _ = run(cfg)
    return cfg, state, records


@pytest.fixture(scope="module")
def euler_shear_run():
    cfg = SimConfig(t_end=1.0, params=ModelParams(), ic=ICSpec(kind="shear"), sample_every=100)
    state, records, _ = run(cfg)
    return cfg, state, records


@pytest.fixture(scope="module")
def alpha_shear_run():
    cfg = SimConfig(
        t_end=1.0,
        params=ModelParams(model="euler_alpha", alpha=1.0, nu=0.0),
        ic=ICSpec(kind="shear"),
        sample_every=100,
    )
    state, records, _ = run(cfg)
    return cfg, state, records


@pytest.fixture(scope="module")
def euler_random_run():
    cfg = SimConfig(t_end=1.0, params=ModelParams(), ic=RANDOM_IC, sample_every=100)
    state, records, _ = run(cfg)
    return cfg, state, records


@pytest.fixture(scope="module")
def alpha_random_run():
    cfg = SimConfig(
        t_end=1.0,
        params=ModelParams(model="euler_alpha", alpha=1.0, nu=0.0),
        ic=RANDOM_IC,
        sample_every=100,
    )
    state, records, _ = run(cfg)
    return cfg, state, records


class TestSteadyStates:
    def test_euler_taylor_green(self, euler_tg_run, grid64):
        cfg, state, _ = euler_tg_run
        drift = sp.max_abs(grid64, state.u - build_ic(cfg.ic, grid64, cfg.params))
        verdict(drift <= 1e-10, "steady state euler/taylor-green", f"sup drift {drift:.3e} <= 1e-10")

    def test_euler_shear(self, euler_shear_run, grid64):
        cfg, state, _ = euler_shear_run
        drift = sp.max_abs(grid64, state.u - build_ic(cfg.ic, grid64, cfg.params))
        verdict(drift <= 1e-10, "steady state euler/shear", f"sup drift {drift:.3e} <= 1e-10")

    def test_alpha_shear(self, alpha_shear_run, grid64):
        cfg, state, _ = alpha_shear_run
        drift = sp.max_abs(grid64, state.u - build_ic(cfg.ic, grid64, cfg.params))
        verdict(drift <= 1e-8, "steady state euler-alpha/shear (nu=0, alpha=1)",
                f"sup drift {drift:.3e} <= 1e-8")


class TestConservationEuler:
    def test_energy_enstrophy_vorticity_sup(self, euler_random_run):
        _, _, records = euler_random_run
        report = assert_conservation(records, "euler", 0.0,
                                     {"energy": 1e-8, "enstrophy": 1e-8, "omega_max": 1e-8})
        detail = ", ".join(f"{r.quantity} {r.drift:.2e}" for r in report.rows)
        verdict(report.passed, "euler conservation over T=1 (random IC p=4 K=8)",
                detail + " <= 1e-8")

    def test_log_bound_ratio_stays_bounded(self, euler_random_run):
        _, _, records = euler_random_run
        ratios = [r.log_bound_ratio for r in records]
        ok = max(ratios) <= 3.0 * ratios[0]
        verdict(ok, "gradient log-bound monitor bounded",
                f"max ratio {max(ratios):.3f} <= 3 x initial {ratios[0]:.3f}")


class TestPotentialVorticityConservation:
    def test_inviscid_q_norms(self, alpha_random_run):
        _, _, records = alpha_random_run
        report = assert_conservation(records, "euler_alpha", 0.0,
                                     {"q_l2": 1e-6, "q_max": 1e-6, "q_mean": 1e-10})
        detail = ", ".join(f"{r.quantity} {r.drift:.2e}" for r in report.rows)
        verdict(report.passed, "potential vorticity conserved (nu=0)", detail)

    def test_q_mean_invariant_for_both_viscosities(self, alpha_random_run):
        _, _, rec0 = alpha_random_run
        cfg = SimConfig(
            t_end=1.0,
            params=ModelParams(model="euler_alpha", alpha=1.0, nu=1e-3),
            ic=RANDOM_IC,
            sample_every=100,
        )
        _, rec_nu, _ = run(cfg)
        drifts = []
        for records in (rec0, rec_nu):
            vals = np.array([r.q_mean for r in records])
            drifts.append(float(np.max(np.abs(vals - vals[0]))))
        ok = all(d <= 1e-10 for d in drifts)
        verdict(ok, "mean(q) invariant for nu in {0, 1e-3}",
                f"drifts {drifts[0]:.2e}, {drifts[1]:.2e} <= 1e-10")


class TestFlowMapStructure:
    def test_volume_and_inverse_defects(self, euler_random_run):
        _, state, _ = euler_random_run
        vd, idf = volume_defect(state.fm), inverse_defect(state.fm)
        verdict(vd <= 1e-8 and idf <= 1e-8, "flow-map structure at T=1",
                f"|det T - 1| {vd:.3e}, |T Tinv - I| {idf:.3e} <= 1e-8")

    def test_coupled_dt_convergence_order(self):
        cfg = SimConfig(t_end=1.0, dt=8e-3, params=ModelParams(), ic=RANDOM_IC,
                        sample_every=10**9)
        orders, slope = coupled_convergence_orders(cfg, halvings=3)
        ok = 3.7 <= slope <= 4.3
        verdict(ok, "coupled integrator dt-order (three halvings to dt=1e-3)",
                f"orders {[f'{o:.3f}' for o in orders]}, fitted {slope:.3f} in [3.7, 4.3]")


class TestExactFlowOracle:
    def test_shear_flow_closed_forms(self, euler_shear_run):
        _, state, _ = euler_shear_run
        lattice = init_flow_map(state.fm.m).eta
        y = lattice[..., 1]
        eta_exact = lattice.copy()
        eta_exact[..., 0] += np.sin(y)  # T = 1
        e_eta = float(np.max(np.abs(state.fm.eta - eta_exact)))
        t_exact = np.zeros_like(state.fm.tangent)
        t_exact[..., 0, 0] = t_exact[..., 1, 1] = 1.0
        t_exact[..., 0, 1] = np.cos(y)
        e_t = float(np.max(np.abs(state.fm.tangent - t_exact)))
        verdict(e_eta <= 1e-8 and e_t <= 1e-8, "shear exact-flow oracle at T=1",
                f"sup errors eta {e_eta:.3e}, tangent {e_t:.3e} <= 1e-8")


class TestSmoothDependence:
    @pytest.mark.parametrize("model", ["euler", "euler_alpha"])
    def test_richardson_ratios(self, model, grid64):
        params = (
            ModelParams() if model == "euler"
            else ModelParams(model="euler_alpha", alpha=1.0, nu=0.0)
        )
        cfg = SimConfig(t_end=1.0, params=params, ic=RANDOM_IC)
        # crossed-shear direction: lowest-wavenumber unit-H^s perturbation with
        # a non-vanishing self-interaction, so the cubic term is visible at
        # eps = 1e-3 against the integrator roundoff floor
        v = np.stack([np.sin(grid64.y + 0.3), np.sin(grid64.x + 0.7)])
        vh = sp.to_spectral(grid64, v)
        vh = vh / sp.sobolev_norm(grid64, vh, cfg.s)
        rows = sensitivity(cfg, vh, [1e-3, 5e-4, 2.5e-4])
        r_eta, r_u = rows[0].ratio_eta, rows[0].ratio_u
        ok = 3.2 <= r_eta <= 4.8 and 3.2 <= r_u <= 4.8
        verdict(ok, f"smooth dependence ({model})",
                f"Richardson ratios eta {r_eta:.3f}, u {r_u:.3f} in [3.2, 4.8]")


class TestZeroViscosityLimit:
    def test_sweep_monotone_with_unit_slope(self):
        cfg = SimConfig(
            t_end=1.0,
            params=ModelParams(model="euler_alpha", alpha=1.0, nu=0.0),
            ic=RANDOM_IC,
            sample_every=10**9,
        )
        rows = viscosity_sweep(cfg, [1e-2, 1e-3, 1e-4])
        sups = [r.eta_sup for r in rows]
        monotone = all(a > b > 0 for a, b in zip(sups, sups[1:]))
        slope = fit_loglog_slope([r.nu for r in rows], sups)
        ok = monotone and slope >= 0.8
        verdict(ok, "zero-viscosity limit",
                f"E(nu) = {[f'{s:.3e}' for s in sups]} strictly decreasing, "
                f"slope {slope:.3f} >= 0.8 (~1 expected)")


class TestFormEquivalence:
    def test_velocity_vs_q_transport(self, grid64):
        cfg = SimConfig(
            t_end=0.5,
            params=ModelParams(model="euler_alpha", alpha=1.0, nu=0.0),
            ic=RANDOM_IC,
            sample_every=10**9,
        )
        state, _, _ = run(cfg)
        u_q = run_q_transport(cfg)
        err = sp.max_abs(grid64, state.u - u_q)
        verdict(err <= 1e-6, "form equivalence at T=0.5 (nu=0, alpha=1)",
                f"sup |u_vel - u_q| {err:.3e} <= 1e-6")


class TestOperatorIdentitySuite:
    def test_100_random_fields(self):
        from torusflow.verify import spectral_identity_suite

        checks = spectral_identity_suite(n=64, trials=100)
        worst = max(checks, key=lambda c: c.measured)
        ok = all(c.measured <= 1e-11 for c in checks)
        verdict(ok, "operator identity suite (100 random fields)",
                f"worst '{worst.name}' {worst.measured:.3e} <= 1e-11")


class TestVerifyCommand:
    def test_exit_zero_with_summary(self):
        proc = subprocess.run(
            [sys.executable, "-m", "torusflow.cli", "verify"],
            capture_output=True,
            text=True,
            timeout=300,
        )
        ok = proc.returncode == 0 and "checks passed" in proc.stdout
        verdict(ok, "cli verify", f"exit {proc.returncode}, summary table emitted")
