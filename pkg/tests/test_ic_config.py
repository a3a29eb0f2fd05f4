"""Initial-condition construction and the strict config file parser."""

import numpy as np
import pytest

from torusflow import spectral as sp
from torusflow.configio import ConfigError, config_from_text, parse_config, serialize_config
from torusflow.dynamics import ModelParams
from torusflow.ic import ICSpec, build_ic


def euler_params():
    return ModelParams()


class TestBuildIC:
    def test_taylor_green_nodes(self, grid64):
        u = sp.to_physical(grid64, build_ic(ICSpec(kind="taylor_green"), grid64, euler_params()))
        assert np.max(np.abs(u[0] - np.sin(grid64.x) * np.cos(grid64.y))) < 1e-12
        assert np.max(np.abs(u[1] + np.cos(grid64.x) * np.sin(grid64.y))) < 1e-12

    def test_shear_nodes(self, grid64):
        u = sp.to_physical(grid64, build_ic(ICSpec(kind="shear"), grid64, euler_params()))
        assert np.max(np.abs(u[0] - np.sin(grid64.y))) < 1e-12
        assert np.max(np.abs(u[1])) < 1e-13

    def test_random_deterministic_and_divfree(self, grid64):
        spec = ICSpec(kind="random", seed=7, decay=4.0, cutoff=8)
        a = build_ic(spec, grid64, euler_params())
        b = build_ic(spec, grid64, euler_params())
        assert np.array_equal(a, b)
        assert sp.max_abs(grid64, sp.div(grid64, a)) < 1e-12
        assert abs(sp.mean_value(grid64, a[0])) < 1e-14
        assert sp.max_abs(grid64, a) == pytest.approx(0.5, rel=1e-12)

    def test_different_seeds_differ(self, grid64):
        a = build_ic(ICSpec(kind="random", seed=7), grid64, euler_params())
        b = build_ic(ICSpec(kind="random", seed=8), grid64, euler_params())
        assert sp.max_abs(grid64, a - b) > 1e-3

    def test_modes_build_vorticity_for_euler(self, grid64):
        spec = ICSpec(kind="modes", modes=((1, 0, 1.0, 0.0),))
        u = sp.to_physical(grid64, build_ic(spec, grid64, euler_params()))
        # w = cos(x) -> u = (0, sin x)
        assert np.max(np.abs(u[0])) < 1e-12
        assert np.max(np.abs(u[1] - np.sin(grid64.x))) < 1e-12

    def test_modes_build_q_for_alpha(self, grid64):
        spec = ICSpec(kind="modes", modes=((0, 1, 2.0, np.pi / 2),))
        params = ModelParams(model="euler_alpha", alpha=1.0)
        u = sp.to_physical(grid64, build_ic(spec, grid64, params))
        # q = 2cos(y + pi/2) = -2 sin y -> w = -sin y -> psi = sin y -> u = (-cos y, 0)
        assert np.max(np.abs(u[0] + np.cos(grid64.y))) < 1e-12
        assert np.max(np.abs(u[1])) < 1e-12

    def test_cutoff_headroom_enforced(self, grid64):
        with pytest.raises(ValueError, match="headroom"):
            build_ic(ICSpec(kind="random", cutoff=22), grid64, euler_params())
        with pytest.raises(ValueError, match="headroom"):
            build_ic(ICSpec(kind="modes", modes=((25, 0, 1.0, 0.0),)), grid64, euler_params())

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ICSpec(kind="vortex_sheet")
        with pytest.raises(ValueError):
            ICSpec(kind="modes")


MINIMAL = """
[grid]
[model]
[ic]
[output]
"""

FULL = """
# full example
[grid]
n = 32
m = 16
dt = 0.002
t_end = 0.5

[model]
model = euler_alpha
alpha = 0.8
nu = 0.001
s = 2.6

[ic]
kind = random
seed = 9
decay = 3.5
cutoff = 5

[output]
dir = results
sample_every = 50
snapshot_every = 100
"""


class TestConfigParse:
    def test_minimal_defaults(self):
        cfg = config_from_text(MINIMAL)
        assert cfg.n == 64 and cfg.m == 32
        assert cfg.dt == pytest.approx(1e-3)
        assert cfg.s == 2.5
        assert cfg.params.model == "euler"
        assert cfg.ic.kind == "taylor_green"

    def test_full_file(self):
        cfg = config_from_text(FULL)
        assert cfg.n == 32 and cfg.m == 16
        assert cfg.params.alpha == pytest.approx(0.8)
        assert cfg.params.nu == pytest.approx(1e-3)
        assert cfg.ic.seed == 9 and cfg.ic.cutoff == 5
        assert cfg.out_dir == "results"

    def test_round_trip_identical(self):
        cfg = config_from_text(FULL)
        again = config_from_text(serialize_config(cfg))
        assert again == cfg
        minimal = config_from_text(MINIMAL)
        assert config_from_text(serialize_config(minimal)) == minimal

    def test_missing_alpha_names_key(self):
        text = MINIMAL.replace("[model]", "[model]\nmodel = euler_alpha")
        with pytest.raises(ConfigError, match="alpha"):
            config_from_text(text)

    def test_odd_n_cites_constraint(self):
        text = MINIMAL.replace("[grid]", "[grid]\nn = 63")
        with pytest.raises(ConfigError, match="even"):
            config_from_text(text)

    def test_unknown_key_rejected(self):
        text = MINIMAL.replace("[grid]", "[grid]\nresolution = 64")
        with pytest.raises(ConfigError, match="resolution"):
            config_from_text(text)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="forcing"):
            config_from_text(MINIMAL + "[forcing]\n")

    def test_type_mismatch_names_key(self):
        text = MINIMAL.replace("[grid]", "[grid]\nn = many")
        with pytest.raises(ConfigError, match="'n'"):
            config_from_text(text)

    def test_euler_with_viscosity_rejected(self):
        text = MINIMAL.replace("[model]", "[model]\nnu = 0.1")
        with pytest.raises(ConfigError, match="inviscid"):
            config_from_text(text)

    def test_random_keys_require_random_kind(self):
        text = MINIMAL.replace("[ic]", "[ic]\nkind = shear\nseed = 3")
        with pytest.raises(ConfigError, match="seed"):
            config_from_text(text)

    def test_duplicate_key_rejected(self):
        text = MINIMAL.replace("[grid]", "[grid]\nn = 64\nn = 32")
        with pytest.raises(ConfigError, match="duplicate"):
            config_from_text(text)

    def test_modes_parsing(self):
        text = MINIMAL.replace("[ic]", "[ic]\nkind = modes\nmodes = 1 0 1.0 0.0; 2 1 0.5 0.7")
        cfg = config_from_text(text)
        assert cfg.ic.modes == ((1, 0, 1.0, 0.0), (2, 1, 0.5, 0.7))
        assert config_from_text(serialize_config(cfg)) == cfg

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(tmp_path / "nope.cfg")

    def test_parse_from_disk(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(FULL)
        assert parse_config(path) == config_from_text(FULL)
