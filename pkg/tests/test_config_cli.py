"""Configuration loading, round-trip, CSV schema and CLI behavior."""

import json
import math

import numpy as np
import pytest

from spinhall import ParseError, RunConfig, ValidationError, load_config, write_config
from spinhall.cli import main
from spinhall.config import OutputConfig, SweepConfig, config_from_dict
from spinhall.sweep import COLUMNS

GOLDEN_HEADER = ("theta_deg,detuning,eta,chi1,chi2,abs_rp,abs_rs,ratio_sp,"
                 "delta_plus_lambda,theta_minus,flags")


class TestLoadConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("")
        cfg = load_config(path)
        assert cfg == RunConfig()
        assert cfg.medium.amplitudes == (1.5, 3.0, 2.5, 0.9)
        assert cfg.stack.lam == pytest.approx(780e-9)
        assert cfg.beam.w0_lambdas == 50.0

    def test_negative_eta_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"medium": {"eta": -0.1}}))
        with pytest.raises(ValidationError, match="eta"):
            load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"medium": {"etaa": 0.1}}))
        with pytest.raises(ValidationError, match="etaa"):
            load_config(path)

    def test_malformed_json_parse_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"medium": {')
        with pytest.raises(ParseError, match="line"):
            load_config(path)

    def test_lambda_preset_values(self):
        cfg = load_config(preset="fig3-lambda")
        assert cfg.medium.amplitudes == (0.5, 0.5, 0.7, 0.7)
        assert cfg.medium.phases[0] == pytest.approx(math.pi)
        assert cfg.medium.eta == 0.1
        medium, _, _ = cfg.build()
        assert abs(medium.couplings.alpha) < 1e-15
        assert medium.couplings.beta.real == pytest.approx(-0.7 / math.sqrt(0.98))

    def test_unknown_preset(self):
        with pytest.raises(ValidationError, match="unknown preset"):
            load_config(preset="fig9-zeta")

    def test_file_overrides_preset(self, tmp_path):
        path = tmp_path / "override.json"
        path.write_text(json.dumps({"medium": {"eta": 0.01}}))
        cfg = load_config(path, preset="fig3-lambda")
        assert cfg.medium.eta == 0.01
        assert cfg.medium.amplitudes == (0.5, 0.5, 0.7, 0.7)

    def test_round_trip(self, tmp_path):
        cfg = config_from_dict({
            "medium": {"eta": 0.05, "amplitudes": [1.0, 2.0, 0.5, 0.5]},
            "sweep": {"theta_deg": [31.0, 35.0, 11], "eta_list": [0.01, 0.1]},
            "output": {"out": "custom.csv", "manifest_header": True},
        })
        path = tmp_path / "cfg.json"
        write_config(cfg, path)
        assert load_config(path) == cfg

    def test_direct_couplings_route(self):
        cfg = config_from_dict({
            "medium": {"alpha": [0.8, 0.0], "beta": [0.0, 0.0], "omega_total": 0.0}})
        medium, _, _ = cfg.build()
        assert medium.couplings.alpha == 0.8
        assert medium.couplings.omega_total == 0.0

    def test_direct_couplings_must_be_complete(self):
        with pytest.raises(ValidationError, match="direct couplings"):
            config_from_dict({"medium": {"alpha": [0.8, 0.0]}}).build()


def run_cli(args, tmp_path, out="out.csv"):
    out_path = tmp_path / out
    code = main(list(args) + ["--out", str(out_path)])
    return code, out_path


class TestCli:
    def test_shift_single_row_positive(self, tmp_path, capsys):
        code, out = run_cli(["shift", "--preset", "fig2-ctl", "--theta", "30",
                             "--detuning", "0"], tmp_path)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == GOLDEN_HEADER
        assert len(lines) == 2
        row = dict(zip(COLUMNS, lines[1].split(",")))
        assert float(row["delta_plus_lambda"]) > 0
        manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
        assert manifest["row_count"] == 1
        assert manifest["flagged_count"] == 0
        assert manifest["tool"] == "spinhall"

    def test_brewster_command(self, tmp_path, capsys):
        code, _ = run_cli(["brewster", "--preset", "fig2-ctl", "--detuning", "0"],
                          tmp_path)
        assert code == 0
        printed = capsys.readouterr().out
        value = float(printed.split("=")[1].split("deg")[0])
        assert value == pytest.approx(33.69, abs=0.05)

    def test_windows_command(self, tmp_path, capsys):
        code, _ = run_cli(["windows", "--preset", "fig2-ctl"], tmp_path)
        assert code == 0
        assert "+0.0000" in capsys.readouterr().out

    def test_oracle_command(self, tmp_path, capsys):
        code, out = run_cli(["oracle", "--preset", "fig2-ctl", "--theta", "30"],
                            tmp_path)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("theta_deg,detuning,delta_closed_lambda")
        rel = float(lines[1].split(",")[-1])
        assert rel < 0.05

    def test_sweep_with_config_and_threads(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "sweep": {"theta_deg": [33.0, 34.0, 5], "detuning": [-1.0, 1.0, 3]}}))
        code, out = run_cli(["sweep", "--preset", "fig3-lambda", "--config",
                             str(cfg_path), "--threads", "2"], tmp_path)
        assert code == 0
        assert len(out.read_text().splitlines()) == 16

    def test_grid_flag_overrides(self, tmp_path):
        code, out = run_cli(["shift", "--preset", "fig2-ctl", "--detuning", "0",
                             "--grid", "33,34,3"], tmp_path)
        assert code == 0
        assert len(out.read_text().splitlines()) == 4

    def test_validation_failure_exits_2(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"medium": {"eta": -1.0}}))
        code = main(["shift", "--config", str(cfg_path)])
        assert code == 2
        assert "eta" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path, capsys):
        code = main(["shift", "--config", str(tmp_path / "nope.json")])
        assert code == 2

    def test_flag_fraction_exits_3(self, tmp_path):
        # two theta points straddling the exact Brewster zero within float
        # resolution: both rows at detuning 0 are flagged, half of all rows
        theta_b = math.degrees(math.atan(1 / 1.5))
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "sweep": {"theta_deg": [theta_b, theta_b + 1e-12, 2],
                      "detuning": [0.0, 1.0, 2]}}))
        code, out = run_cli(["sweep", "--preset", "fig2-ctl", "--config",
                             str(cfg_path)], tmp_path)
        assert code == 3
        text = out.read_text()
        assert "brewster_singularity" in text

    def test_manifest_header_option(self, tmp_path):
        code, out = run_cli(["shift", "--preset", "fig2-ctl", "--theta", "30",
                             "--detuning", "0", "--manifest-header"], tmp_path)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# ")
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == GOLDEN_HEADER

    def test_json_format(self, tmp_path):
        code, out = run_cli(["shift", "--preset", "fig2-ctl", "--theta", "30",
                             "--detuning", "0", "--format", "json"], tmp_path,
                            out="out.json")
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["columns"] == list(COLUMNS)
        assert len(payload["rows"]) == 1
        assert payload["manifest"]["row_count"] == 1

    def test_reproduce_fig4c(self, tmp_path):
        code, out = run_cli(["reproduce", "fig4c"], tmp_path)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == GOLDEN_HEADER
        assert len(lines) == 101  # 2 angles x 50 densities

    def test_reproduce_unknown_target(self, tmp_path, capsys):
        code = main(["reproduce", "fig99x", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_reproduce_reflection_profile(self, tmp_path):
        code, out = run_cli(["reproduce", "fig2b"], tmp_path)
        assert code == 0
        assert len(out.read_text().splitlines()) == 802

    def test_reproduce_angular_maximum_curve(self, tmp_path):
        code, out = run_cli(["reproduce", "fig5b"], tmp_path)
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 42
        tilt = [float(l.split(",")[-2]) for l in lines[1:]]
        assert all(t > 0 for t in tilt)

    def test_angular_subcommand(self, tmp_path):
        code, out = run_cli(["angular", "--preset", "fig3-lambda", "--theta", "34",
                             "--detuning", "0.1"], tmp_path)
        assert code == 0
        row = dict(zip(COLUMNS, out.read_text().splitlines()[1].split(",")))
        assert float(row["theta_minus"]) != 0.0

    def test_susceptibility_eta_override(self, tmp_path, capsys):
        code, _ = run_cli(["susceptibility", "--preset", "fig4-ntype",
                           "--eta", "0.2"], tmp_path)
        assert code == 0
        printed = capsys.readouterr().out
        chi_im = float(printed.splitlines()[0].split()[-1].rstrip("i"))
        assert chi_im == pytest.approx(0.2 * 49 / 37, rel=1e-6)

    def test_numeric_format_nine_digits_lowercase(self, tmp_path):
        _, out = run_cli(["shift", "--preset", "fig2-ctl", "--theta", "30",
                          "--detuning", "0"], tmp_path)
        row = out.read_text().splitlines()[1]
        first = row.split(",")[0]
        assert first == "3.00000000e+01"
        assert "E" not in row
