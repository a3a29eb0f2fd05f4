"""Flat key=value run-configuration files with [grid] / [model] / [ic] / [output]
sections.  Parsing is strict: unknown sections or keys are rejected, and every
error message names the offending key and the violated constraint."""

from __future__ import annotations

import os

from .dynamics import EULER, EULER_ALPHA, ModelParams
from .ic import IC_KINDS, ICSpec
from .simulate import SimConfig


class ConfigError(ValueError):
    pass


_SECTION_KEYS = {
    "grid": {"n", "m", "dt", "t_end"},
    "model": {"model", "alpha", "nu", "s"},
    "ic": {"kind", "modes", "seed", "decay", "cutoff"},
    "output": {"dir", "sample_every", "snapshot_every"},
}


def _parse_sections(text: str, source: str):
    sections = {name: {} for name in _SECTION_KEYS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SECTION_KEYS:
                raise ConfigError(f"{source}:{lineno}: unknown section [{current}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {line!r}")
        if current is None:
            raise ConfigError(f"{source}:{lineno}: key outside any section")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SECTION_KEYS[current]:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r} in section [{current}]")
        if key in sections[current]:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        sections[current][key] = value
    return sections


def _get(section, key, convert, default, constraint=None, check=None):
    if key not in section:
        if default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r}")
        return default
    raw = section[key]
    try:
        value = convert(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {convert.__name__}") from None
    if check is not None and not check(value):
        raise ConfigError(f"key {key!r}: value {value!r} violates constraint: {constraint}")
    return value


_REQUIRED = object()


def _parse_modes(raw: str):
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 4:
            raise ConfigError(
                f"key 'modes': each entry needs 'k1 k2 amplitude phase', got {chunk!r}"
            )
        k1, k2 = int(parts[0]), int(parts[1])
        out.append((k1, k2, float(parts[2]), float(parts[3])))
    return tuple(out)


def config_from_text(text: str, source: str = "<config>") -> SimConfig:
    sec = _parse_sections(text, source)

    n = _get(sec["grid"], "n", int, 64, "even and >= 8", lambda v: v >= 8 and v % 2 == 0)
    m = _get(sec["grid"], "m", int, 32, ">= 2", lambda v: v >= 2)
    dt = _get(sec["grid"], "dt", float, 1e-3, "> 0", lambda v: v > 0)
    t_end = _get(sec["grid"], "t_end", float, 1.0, ">= 0", lambda v: v >= 0)

    model = _get(sec["model"], "model", str, EULER, f"'{EULER}' or '{EULER_ALPHA}'",
                 lambda v: v in (EULER, EULER_ALPHA))
    nu = _get(sec["model"], "nu", float, 0.0, ">= 0", lambda v: v >= 0)
    s = _get(sec["model"], "s", float, 2.5, "> 2", lambda v: v > 2)
    if model == EULER_ALPHA:
        alpha = _get(sec["model"], "alpha", float, _REQUIRED, "> 0", lambda v: v > 0)
    else:
        if "alpha" in sec["model"]:
            raise ConfigError("key 'alpha': only meaningful with model = euler_alpha")
        if nu != 0.0:
            raise ConfigError("key 'nu': the euler model is inviscid; nu must be 0")
        alpha = 1.0
    try:
        params = ModelParams(model=model, alpha=alpha, nu=nu)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    kind = _get(sec["ic"], "kind", str, "taylor_green", f"one of {IC_KINDS}",
                lambda v: v in IC_KINDS)
    if "modes" in sec["ic"] and kind != "modes":
        raise ConfigError("key 'modes': only meaningful with kind = modes")
    for key in ("seed", "decay", "cutoff"):
        if key in sec["ic"] and kind != "random":
            raise ConfigError(f"key {key!r}: only meaningful with kind = random")
    modes = _parse_modes(sec["ic"]["modes"]) if "modes" in sec["ic"] else ()
    seed = _get(sec["ic"], "seed", int, 0, None, None)
    decay = _get(sec["ic"], "decay", float, 4.0, "> 0", lambda v: v > 0)
    cutoff = _get(sec["ic"], "cutoff", int, 8, f"1 <= K < n/3 = {n / 3:g}",
                  lambda v: 1 <= v < n / 3)
    try:
        ic = ICSpec(kind=kind, modes=modes, seed=seed, decay=decay, cutoff=cutoff)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    out_dir = _get(sec["output"], "dir", str, "out", None, None)
    sample_every = _get(sec["output"], "sample_every", int, 100, ">= 1", lambda v: v >= 1)
    snapshot_every = _get(sec["output"], "snapshot_every", int, 0, ">= 0", lambda v: v >= 0)

    try:
        return SimConfig(n=n, m=m, dt=dt, t_end=t_end, params=params, ic=ic, s=s,
                         sample_every=sample_every, snapshot_every=snapshot_every,
                         out_dir=out_dir)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path) -> SimConfig:
    path = os.fspath(path)
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_text(fh.read(), source=path)


def serialize_config(config: SimConfig) -> str:
    lines = [
        "[grid]",
        f"n = {config.n}",
        f"m = {config.m}",
        f"dt = {config.dt!r}",
        f"t_end = {config.t_end!r}",
        "",
        "[model]",
        f"model = {config.params.model}",
    ]
    if config.params.model == EULER_ALPHA:
        lines.append(f"alpha = {config.params.alpha!r}")
    lines.append(f"nu = {config.params.nu!r}")
    lines.append(f"s = {config.s!r}")
    lines += ["", "[ic]", f"kind = {config.ic.kind}"]
    if config.ic.kind == "modes":
        entries = "; ".join(f"{k1} {k2} {amp!r} {phase!r}" for k1, k2, amp, phase in config.ic.modes)
        lines.append(f"modes = {entries}")
    if config.ic.kind == "random":
        lines.append(f"seed = {config.ic.seed}")
        lines.append(f"decay = {config.ic.decay!r}")
        lines.append(f"cutoff = {config.ic.cutoff}")
    lines += [
        "",
        "[output]",
        f"dir = {config.out_dir}",
        f"sample_every = {config.sample_every}",
        f"snapshot_every = {config.snapshot_every}",
        "",
    ]
    return "\n".join(lines)
