import json
import subprocess
import sys

import pytest

from poincare_lab.cli import (
    ExperimentConfig,
    list_experiments,
    main,
    parse_config_file,
    run,
)

ALL_EXPERIMENTS = {
    "hypotheses-audit", "property-q", "poincare-sweep", "dumbbell-blowup",
    "tube-family", "average-scaling", "clarke-band",
}


class TestListing:
    def test_seven_experiments(self, capsys):
        assert main([]) == 0
        out = capsys.readouterr().out
        for name in ALL_EXPERIMENTS:
            assert name in out
        assert {n for n, _ in list_experiments()} == ALL_EXPERIMENTS

    def test_json_listing(self, capsys):
        assert main(["list", "--json"]) == 0
        parsed = json.loads(capsys.readouterr().out)
        assert set(parsed) == ALL_EXPERIMENTS

    def test_unknown_flag_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["list", "--bogus"])
        assert exc.value.code != 0

    def test_unknown_experiment(self, capsys):
        rc = main(["warp-drive"])
        assert rc == 2
        assert "unknown experiment" in capsys.readouterr().err


class TestConfig:
    def test_parse_and_coerce(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("# comment\nfamily = square\nh = 0.015625\n"
                       "eps = 0.2,0.1\nexpect_h2 = true\nn = 7\n")
        parsed = parse_config_file(cfg)
        assert parsed["family"] == "square"
        assert parsed["h"] == 0.015625
        assert parsed["eps"] == [0.2, 0.1]
        assert parsed["expect_h2"] is True
        assert parsed["n"] == 7

    def test_bad_line_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("this is not a pair\n")
        with pytest.raises(ValueError):
            parse_config_file(cfg)

    def test_override_must_be_pair(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["property-q", "--out", str(tmp_path), "slopetarget"])


class TestRuns:
    def test_hypotheses_audit_square(self, tmp_path):
        rc = main(["hypotheses-audit", "--out", str(tmp_path), "h=0.0078125",
                   "h3_deltas=0.05,0.1,0.2"])
        assert rc == 0
        report = json.loads((tmp_path / "hypotheses-audit.json").read_text())
        assert report["passed"]
        audit = report["audit"]
        assert audit["h2"]["holds"] and audit["h3"]["delta0"] == 0.2
        assert abs(audit["h1"]["R"] - 2**0.5) < 0.0078125
        assert (tmp_path / "hypotheses-audit.csv").exists()
        assert (tmp_path / "hypotheses-audit__q_layer.dat").exists()

    def test_property_q_square(self, tmp_path):
        rc = main(["property-q", "--out", str(tmp_path)])
        assert rc == 0
        report = json.loads((tmp_path / "property-q.json").read_text())
        slope = report["fits"]["linear"]["slope"]
        assert abs(slope - 4.0) <= 0.2
        assert report["fits"]["linear"]["r2"] >= 0.99

    def test_property_q_patch_mode(self, tmp_path):
        rc = main(["property-q", "--out", str(tmp_path), "mode=patch", "m_lip=1.0"])
        assert rc == 0

    def test_exit_code_on_tolerance_failure(self, tmp_path):
        # impossible slope target forces a declared-tolerance failure
        rc = main(["property-q", "--out", str(tmp_path), "slope_target=40.0"])
        assert rc == 1

    def test_poincare_sweep_small(self, tmp_path):
        rc = main(["poincare-sweep", "--out", str(tmp_path), "h=0.03125",
                   "families=square,ball", "restarts=2"])
        assert rc == 0
        lines = (tmp_path / "poincare-sweep.csv").read_text().strip().splitlines()
        assert lines[0].rstrip("\r") == "family,param,h,p,method,C,residual,iterations"
        assert len(lines) == 1 + 4  # spectral + variational per family

    def test_dumbbell_blowup_short(self, tmp_path):
        rc = main(["dumbbell-blowup", "--out", str(tmp_path), "eps=0.2,0.1",
                   "h=0.03125", "slope_tol=0.5"])
        assert rc == 0
        report = json.loads((tmp_path / "dumbbell-blowup.json").read_text())
        assert report["passed"]

    def test_clarke_band_small(self, tmp_path):
        rc = main(["clarke-band", "--out", str(tmp_path), "h=0.015625", "ms=0,1"])
        assert rc == 0
        report = json.loads((tmp_path / "clarke-band.json").read_text())
        assert all(b["n_violations"] == 0 for b in report["band_reports"])

    def test_determinism_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        argv = ["poincare-sweep", "h=0.03125", "families=square", "restarts=2",
                "--seed", "7"]
        assert main(argv + ["--out", str(out1)]) == 0
        assert main(argv + ["--out", str(out2)]) == 0
        assert (out1 / "poincare-sweep.csv").read_bytes() == \
               (out2 / "poincare-sweep.csv").read_bytes()
        assert (out1 / "poincare-sweep.json").read_bytes() == \
               (out2 / "poincare-sweep.json").read_bytes()

    def test_jobs_parallel_matches_serial(self, tmp_path):
        out1, out2 = tmp_path / "serial", tmp_path / "par"
        argv = ["tube-family", "h=0.015625", "deltas=0.05", "directions=24"]
        assert main(argv + ["--out", str(out1)]) == 0
        assert main(argv + ["--out", str(out2), "--jobs", "3"]) == 0
        assert (out1 / "tube-family.csv").read_bytes() == \
               (out2 / "tube-family.csv").read_bytes()

    def test_config_file_plus_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("family=square\nh=0.03125\nq_fit_points=6\nfit_window=0.2\n")
        rc = main(["property-q", "--config", str(cfg), "--out", str(tmp_path),
                   "slope_rtol=0.2", "r2_min=0.95"])
        assert rc == 0
        echoed = json.loads((tmp_path / "property-q.json").read_text())["config"]
        assert echoed["params"]["h"] == 0.03125
        assert echoed["params"]["slope_rtol"] == 0.2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-c", "from poincare_lab.cli import main; import sys; sys.exit(main(['list']))"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert "dumbbell-blowup" in proc.stdout
