import csv

import pytest

from qosguard.cli import main
from qosguard.config import ConfigError, parse_config

ANALYZE_INI = """
[system]
channels = 100
guard = 10
holding_time = 120

[traffic]
ratio = 1,1,1,1

[sweep]
lambda_total = 0.5, 0.667, 0.833
"""

SIM_INI = """
[traffic]
rates = 0.2, 0.2, 0.2, 0.2

[simulation]
arrivals = 20000
seed = 3
events = true
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestParseConfig:
    def test_minimal_config_gets_defaults(self):
        spec = parse_config("[traffic]\nrates = 0.3, 0.4, 0.2, 0.1\n")
        assert spec.config.n_channels == 100
        assert spec.config.guard == 10
        assert spec.config.mu == pytest.approx(1 / 120)
        assert spec.config.window_n == 100
        assert spec.profile.rates == (0.3, 0.4, 0.2, 0.1)

    def test_guard_exceeding_channels_rejected(self):
        with pytest.raises(ConfigError, match="guard"):
            parse_config("[system]\nchannels = 5\nguard = 6\n")

    def test_negative_rate_rejected(self):
        with pytest.raises(ConfigError, match=r"\[traffic\] rates"):
            parse_config("[traffic]\nrates = 0.3, -0.1\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match=r"\[system\] bogus"):
            parse_config("[system]\nbogus = 1\n")

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match=r"unknown section"):
            parse_config("[wat]\nx = 1\n")

    def test_non_increasing_grid_rejected(self):
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_config("[sweep]\nlambda_total = 0.5, 0.5, 0.7\n")

    def test_type_mismatch_reports_field(self):
        with pytest.raises(ConfigError, match=r"\[system\] channels"):
            parse_config("[system]\nchannels = many\n")


class TestCliModes:
    def test_analyze_outputs(self, tmp_path):
        cfg = tmp_path / "exp.ini"
        cfg.write_text(ANALYZE_INI)
        out = tmp_path / "out"
        assert main(["analyze", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out / "blocking.csv")
        assert rows[0] == [
            "lambda_T", "B_1", "B_2", "B_3", "B_4",
            "utilization", "B_sharing", "util_sharing",
        ]
        assert len(rows) == 4
        # per-class blocking is monotone in class index on every row
        for row in rows[1:]:
            bs = [float(x) for x in row[1:5]]
            assert bs == sorted(bs)
        part = read_csv(out / "partition_trace.csv")
        assert part[1][1:] == ["10", "7", "5", "2"]
        assert (out / "manifest.txt").exists()

    def test_partition_staircase_sweep(self, tmp_path):
        cfg = tmp_path / "exp.ini"
        cfg.write_text(
            "[traffic]\nrates = 0.3, 0.4, 0.2, 0.1\n"
            "[sweep]\nlambda_1 = 0.1, 0.3, 0.5\n"
        )
        out = tmp_path / "out"
        assert main(["analyze", "--config", str(cfg), "--out", str(out)]) == 0
        part = read_csv(out / "partition_trace.csv")
        assert part[0] == ["lambda_1", "y_1", "y_2", "y_3", "y_4"]
        by_l1 = {row[0]: row[1:] for row in part[1:]}
        assert by_l1["0.3"] == ["10", "7", "3", "1"]

    def test_simulate_byte_identical_reruns(self, tmp_path):
        cfg = tmp_path / "sim.ini"
        cfg.write_text(SIM_INI)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["simulate", "--config", str(cfg), "--out", str(out2)]) == 0
        for name in ["blocking.csv", "utilization.csv", "partition_trace.csv",
                     "events.csv", "manifest.txt"]:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_compare_outputs(self, tmp_path):
        cfg = tmp_path / "sim.ini"
        cfg.write_text("[traffic]\nrates = 0.3,0.3\n[simulation]\narrivals = 5000\n")
        out = tmp_path / "out"
        assert main(["compare", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out / "blocking.csv")
        policies = {row[1] for row in rows[1:]}
        assert policies == {"dynamic", "sharing"}

    def test_sweep_mode(self, tmp_path):
        cfg = tmp_path / "sweep.ini"
        cfg.write_text(
            "[system]\nchannels = 10\nguard = 2\nholding_time = 1\n"
            "[traffic]\nratio = 1,1\n"
            "[sweep]\nlambda_total = 4, 8\n"
            "[simulation]\narrivals = 20000\nbypass_estimator = true\n"
        )
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out / "blocking.csv")
        assert rows[0][-1] == "analytic_blocking"
        assert len(rows) == 5  # 2 points x 2 classes + header

    def test_vlc_link_mode(self, tmp_path):
        cfg = tmp_path / "vlc.ini"
        cfg.write_text("[vlc]\nhalf_power_angle = 60\ndistance = 2\n")
        out = tmp_path / "out"
        assert main(["vlc-link", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out / "link_budget.csv")
        record = dict(zip(rows[0], rows[1]))
        assert float(record["channel_gain"]) == pytest.approx(2.387e-5, rel=1e-3)
        bands = read_csv(out / "color_bands.csv")
        assert len(bands) == 8

    def test_config_error_exit_code(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[system]\nchannels = -3\n")
        assert main(["analyze", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_missing_config_exit_code(self, tmp_path):
        assert main(["analyze", "--config", str(tmp_path / "nope.ini")]) == 2

    def test_cli_overrides(self, tmp_path):
        cfg = tmp_path / "sim.ini"
        cfg.write_text("[traffic]\nrates = 0.3,0.3\n[simulation]\narrivals = 99\n")
        out = tmp_path / "out"
        assert main([
            "simulate", "--config", str(cfg), "--out", str(out),
            "--arrivals", "5000", "--seed", "42", "--policy", "sharing",
        ]) == 0
        manifest = (out / "manifest.txt").read_text()
        assert "simulation.arrivals=5000" in manifest
        assert "simulation.seed=42" in manifest
        assert "simulation.policy=sharing" in manifest
