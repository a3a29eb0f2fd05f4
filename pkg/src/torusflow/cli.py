"""Command-line entry point: simulate | sweep | sensitivity | verify.

Exit codes: 0 success, 1 assertion/instability failure, 2 usage or config
error.  Every output file is written atomically (temp file + rename), so
concurrent sweep members may share an output directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import verify as verify_mod
from .configio import ConfigError, parse_config
from .diagnostics import records_to_csv
from .dynamics import EULER_ALPHA, potential_vorticity
from .grid import make_grid
from .ic import ICSpec, build_ic
from .simulate import (
    SimConfig,
    SimulationAborted,
    fit_loglog_slope,
    run,
    sensitivity,
    viscosity_sweep,
)
from .snapshots import atomic_write, encode_field, encode_flowmap
from .spectral import curl2d, sobolev_norm, to_physical

USAGE_ERROR = 2
CHECK_ERROR = 1


def _load_config(args) -> SimConfig:
    config = parse_config(args.config)
    if args.out is not None:
        config = replace(config, out_dir=args.out)
    if args.seed is not None:
        if config.ic.kind != "random":
            raise ConfigError("--seed only applies to random initial conditions")
        config = replace(config, ic=replace(config.ic, seed=args.seed))
    return config


def _say(args, message):
    if not args.quiet:
        print(message)


def _write_state_snapshots(config, state, label):
    grid = state.grid
    u_phys = to_physical(grid, state.u)
    omega = to_physical(grid, curl2d(grid, state.u))
    out = config.out_dir
    atomic_write(os.path.join(out, f"u_{label}.fld"), encode_field(u_phys, state.t))
    atomic_write(os.path.join(out, f"omega_{label}.fld"), encode_field(omega, state.t))
    if state.params.model == EULER_ALPHA:
        q = to_physical(grid, potential_vorticity(grid, state.u, state.params.alpha))
        atomic_write(os.path.join(out, f"q_{label}.fld"), encode_field(q, state.t))
    atomic_write(os.path.join(out, f"fm_{label}.fmp"), encode_flowmap(state.fm))


def cmd_simulate(args) -> int:
    config = _load_config(args)
    snapshots = []

    def on_sample(state):
        if config.snapshot_every and round(state.t / config.dt) % config.snapshot_every == 0:
            snapshots.append(state.t)

    try:
        state, records, _ = run(config)
    except SimulationAborted as exc:
        dump = os.path.join(config.out_dir, "abort.txt")
        atomic_write(dump, f"aborted: {exc}\n".encode())
        print(f"error: {exc} (dump in {dump})", file=sys.stderr)
        return CHECK_ERROR
    initial = run(replace(config, t_end=0.0))[0]
    _write_state_snapshots(config, initial, "initial")
    _write_state_snapshots(config, state, "final")
    atomic_write(os.path.join(config.out_dir, "diagnostics.csv"), records_to_csv(records).encode())
    _say(args, f"run finished at t={state.t:g}; outputs in {config.out_dir}/")
    return 0


def cmd_sweep(args) -> int:
    config = _load_config(args)
    if config.params.model != EULER_ALPHA:
        raise ConfigError("sweep requires model = euler_alpha (the euler model has no viscosity)")
    nu_list = [float(v) for v in args.nus.split(",") if v.strip()]
    try:
        rows = viscosity_sweep(config, nu_list)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    slope = fit_loglog_slope([r.nu for r in rows], [r.eta_sup for r in rows]) if len(rows) > 1 else float("nan")
    lines = ["nu,eta_sup,u_l2"]
    for r in rows:
        lines.append(f"{r.nu!r},{r.eta_sup!r},{r.u_l2!r}")
    atomic_write(os.path.join(config.out_dir, "sweep.csv"), ("\n".join(lines) + "\n").encode())
    _say(args, f"sweep written to {config.out_dir}/sweep.csv (log-log slope {slope:.3f})")
    return 0


def cmd_sensitivity(args) -> int:
    config = _load_config(args)
    eps_list = [float(v) for v in args.epsilons.split(",") if v.strip()]
    grid = make_grid(config.n)
    direction = build_ic(
        ICSpec(kind="random", seed=args.direction_seed, decay=3.0, cutoff=6), grid, config.params
    )
    direction = direction / sobolev_norm(grid, direction, config.s)
    try:
        rows = sensitivity(config, direction, eps_list)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = ["eps,deriv_eta,deriv_u,diff_eta,diff_u,ratio_eta,ratio_u"]

    def fmt(v):
        return "" if v is None else repr(v)

    for r in rows:
        lines.append(
            ",".join(
                [repr(r.eps), repr(r.deriv_eta), repr(r.deriv_u), fmt(r.diff_eta), fmt(r.diff_u), fmt(r.ratio_eta), fmt(r.ratio_u)]
            )
        )
    atomic_write(os.path.join(config.out_dir, "sensitivity.csv"), ("\n".join(lines) + "\n").encode())
    ratios = [r.ratio_eta for r in rows if r.ratio_eta is not None]
    _say(
        args,
        f"sensitivity written to {config.out_dir}/sensitivity.csv"
        + (f" (first eta ratio {ratios[0]:.3f})" if ratios else ""),
    )
    return 0


def cmd_verify(args) -> int:
    checks = verify_mod.run_all()
    print(verify_mod.render_report(checks), end="")
    return 0 if all(c.passed for c in checks) else CHECK_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torusflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--seed", type=int, help="random-ic seed override")
        p.add_argument("--quiet", action="store_true")

    p_sim = sub.add_parser("simulate", help="single run with diagnostics and snapshots")
    common(p_sim)
    p_sweep = sub.add_parser("sweep", help="viscosity sweep against the inviscid reference")
    common(p_sweep)
    p_sweep.add_argument("--nus", default="1e-2,1e-3,1e-4", help="comma-separated descending viscosities")
    p_sens = sub.add_parser("sensitivity", help="finite-difference smooth-dependence study")
    common(p_sens)
    p_sens.add_argument("--epsilons", default="1e-3,5e-4,2.5e-4", help="comma-separated descending perturbation sizes")
    p_sens.add_argument("--direction-seed", type=int, default=1, help="seed of the perturbation direction field")
    p_ver = sub.add_parser("verify", help="run the full invariant suite")
    p_ver.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
        "sensitivity": cmd_sensitivity,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
