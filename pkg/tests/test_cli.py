"""CLI subcommands: exit codes, outputs, and determinism of written files."""

import os

import numpy as np
import pytest

from torusflow.cli import main
from torusflow.diagnostics import csv_to_records
from torusflow.snapshots import read_field_snapshot, read_flowmap_snapshot

SMALL_RUN = """
[grid]
n = 32
m = 8
dt = 0.002
t_end = 0.05

[model]
model = euler

[ic]
kind = taylor_green

[output]
sample_every = 5
"""

ALPHA_RUN = SMALL_RUN.replace("model = euler", "model = euler_alpha\nalpha = 1.0")


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(SMALL_RUN)
    return path


class TestSimulate:
    def test_run_writes_outputs(self, small_cfg, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(small_cfg), "--out", str(out)]) == 0
        records = csv_to_records((out / "diagnostics.csv").read_text())
        assert records[0].t == 0.0
        assert records[-1].t == pytest.approx(0.05)
        u, t = read_field_snapshot(out / "u_final.fld")
        assert u.shape == (2, 32, 32) and t == pytest.approx(0.05)
        w, _ = read_field_snapshot(out / "omega_final.fld")
        assert w.shape == (1, 32, 32)
        fm = read_flowmap_snapshot(out / "fm_final.fmp")
        assert fm.m == 8
        assert not (out / "q_final.fld").exists()  # euler model: no q snapshot

    def test_alpha_run_writes_q(self, tmp_path):
        cfg = tmp_path / "alpha.cfg"
        cfg.write_text(ALPHA_RUN)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        q, _ = read_field_snapshot(out / "q_final.fld")
        assert q.shape == (1, 32, 32)

    def test_outputs_deterministic(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(SMALL_RUN.replace("kind = taylor_green", "kind = random\nseed = 5"))
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(out_a), "--quiet"]) == 0
        assert main(["simulate", "--config", str(cfg), "--out", str(out_b), "--quiet"]) == 0
        for name in ("diagnostics.csv", "u_final.fld", "omega_final.fld", "fm_final.fmp"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    def test_seed_override_changes_output(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(SMALL_RUN.replace("kind = taylor_green", "kind = random\nseed = 5"))
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", str(cfg), "--out", str(out_a), "--quiet"])
        main(["simulate", "--config", str(cfg), "--out", str(out_b), "--seed", "6", "--quiet"])
        assert (out_a / "u_final.fld").read_bytes() != (out_b / "u_final.fld").read_bytes()

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "missing.cfg")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_bad_config_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(SMALL_RUN.replace("n = 32", "n = 33"))
        assert main(["simulate", "--config", str(cfg)]) == 2
        assert "even" in capsys.readouterr().err


class TestSweep:
    def test_requires_alpha_model(self, small_cfg, capsys):
        assert main(["sweep", "--config", str(small_cfg)]) == 2
        assert "euler_alpha" in capsys.readouterr().err

    def test_writes_sweep_csv(self, tmp_path):
        cfg = tmp_path / "alpha.cfg"
        cfg.write_text(ALPHA_RUN.replace("kind = taylor_green", "kind = shear"))
        out = tmp_path / "out"
        rc = main(["sweep", "--config", str(cfg), "--out", str(out), "--nus", "1e-1,1e-2", "--quiet"])
        assert rc == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "nu,eta_sup,u_l2"
        nus = [float(ln.split(",")[0]) for ln in lines[1:]]
        assert nus == [0.1, 0.01]

    def test_rejects_zero_nu(self, tmp_path, capsys):
        cfg = tmp_path / "alpha.cfg"
        cfg.write_text(ALPHA_RUN)
        assert main(["sweep", "--config", str(cfg), "--nus", "0"]) == 2


class TestSensitivity:
    def test_writes_richardson_table(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(SMALL_RUN.replace("kind = taylor_green", "kind = random\nseed = 5"))
        out = tmp_path / "out"
        rc = main(
            ["sensitivity", "--config", str(cfg), "--out", str(out),
             "--epsilons", "1e-3,5e-4,2.5e-4", "--quiet"]
        )
        assert rc == 0
        lines = (out / "sensitivity.csv").read_text().splitlines()
        assert lines[0] == "eps,deriv_eta,deriv_u,diff_eta,diff_u,ratio_eta,ratio_u"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[5] != ""  # ratio present on the first row
        last = lines[3].split(",")
        assert last[3] == "" and last[5] == ""  # no difference/ratio on the last row

    def test_bad_epsilons_exit_2(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(SMALL_RUN)
        assert main(["sensitivity", "--config", str(cfg), "--epsilons", "1e-4,1e-3"]) == 2


class TestVerifyPlumbing:
    def test_report_rendering(self):
        from torusflow.verify import CheckResult, render_report

        text = render_report([CheckResult("alpha", 1e-13, 1e-11), CheckResult("beta", 1.0, 1e-11)])
        assert "alpha" in text and "pass" in text and "FAIL" in text
        assert "1/2 checks passed" in text

    def test_spectral_suite_smoke(self):
        from torusflow.verify import spectral_identity_suite

        checks = spectral_identity_suite(n=32, trials=3)
        assert all(c.passed for c in checks)
