import json

import pytest

from ofdm_bitload import SystemConfig, dump_config, updated
from ofdm_bitload.cli import main
from ofdm_bitload.experiments import CSV_HEADER


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAllocate:
    def test_baseline_json_summary(self, capsys):
        code, out, _ = run_cli(capsys, "--seed", "0", "allocate")
        assert code == 0
        summary = json.loads(out)
        assert summary["status"] == "met"
        assert summary["throughput_bits"] > 0
        assert summary["mean_ber"] <= 1e-4
        assert len(summary["loads"]) == 128

    def test_deterministic(self, capsys):
        _, out_a, _ = run_cli(capsys, "--seed", "9", "allocate")
        _, out_b, _ = run_cli(capsys, "--seed", "9", "allocate")
        assert out_a == out_b

    def test_overrides_change_result(self, capsys):
        _, rich, _ = run_cli(capsys, "allocate", "--sir-db", "20")
        _, poor, _ = run_cli(capsys, "allocate", "--sir-db", "-20")
        assert json.loads(rich)["throughput_bits"] \
            > json.loads(poor)["throughput_bits"]


class TestSweep:
    def test_snr_sweep_writes_csv_and_sidecar(self, capsys, tmp_path):
        out_csv = tmp_path / "snr.csv"
        code, out, err = run_cli(
            capsys, "--trials", "10", "--workers", "1",
            "--output", str(out_csv),
            "sweep-snr", "--grid", "10,20")
        assert code == 0
        assert out.strip() == str(out_csv)
        assert "2 points x 10 trials" in err
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        sidecar = json.loads((tmp_path / "snr.json").read_text())
        assert sidecar["sweep"]["kind"] == "snr"
        assert len(sidecar["records"]) == 2

    def test_fn_sweep_with_default_grid(self, capsys, tmp_path):
        out_csv = tmp_path / "fn.csv"
        code, _, _ = run_cli(
            capsys, "--trials", "2", "--workers", "1",
            "--output", str(out_csv), "sweep-fn")
        assert code == 0
        assert len(out_csv.read_text().strip().split("\n")) == 17

    def test_bad_grid_is_domain_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "--output", str(tmp_path / "x.csv"),
            "sweep-snr", "--grid", "20,10")
        assert code == 3
        assert "error:" in err


class TestProfileDump:
    def test_analytic_only(self, capsys, tmp_path):
        out_csv = tmp_path / "prof.csv"
        code, out, _ = run_cli(capsys, "--output", str(out_csv), "profile-dump")
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == "k,variance_analytic"
        assert len(lines) == 129
        sidecar = json.loads((tmp_path / "prof.json").read_text())
        assert sidecar["sigma_b2"] > 0

    def test_with_mc_column(self, capsys, tmp_path):
        out_csv = tmp_path / "prof.csv"
        code, _, _ = run_cli(capsys, "--output", str(out_csv),
                             "profile-dump", "--mc-symbols", "50")
        assert code == 0
        assert out_csv.read_text().splitlines()[0] \
            == "k,variance_analytic,variance_mc"


class TestVerify:
    def test_summary_contains_measured_ber(self, capsys):
        code, out, _ = run_cli(capsys, "--seed", "11", "verify",
                               "--sir-db", "-10", "--symbols", "5000")
        assert code == 0
        summary = json.loads(out)
        assert summary["status"] == "met"
        assert summary["measured_mean_ber"] >= 0.0
        assert summary["target_ber"] == 1e-4


class TestConfigHandling:
    def test_config_file_flag(self, capsys, tmp_path):
        cfg = updated(SystemConfig(), {"link.sir_db": -20.0})
        path = tmp_path / "low_sir.cfg"
        path.write_text(dump_config(cfg))
        _, out, _ = run_cli(capsys, "--config", str(path), "allocate")
        _, base, _ = run_cli(capsys, "allocate")
        assert json.loads(out)["throughput_bits"] \
            < json.loads(base)["throughput_bits"]

    def test_config_env_var(self, capsys, tmp_path, monkeypatch):
        cfg = updated(SystemConfig(), {"link.sir_db": -20.0})
        path = tmp_path / "env.cfg"
        path.write_text(dump_config(cfg))
        monkeypatch.setenv("OFDM_BITLOAD_CONFIG", str(path))
        _, out_env, _ = run_cli(capsys, "allocate")
        monkeypatch.delenv("OFDM_BITLOAD_CONFIG")
        _, out_flag, _ = run_cli(capsys, "--config", str(path), "allocate")
        assert out_env == out_flag

    def test_invalid_config_value_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("link.target_ber = 0\n")
        code, _, err = run_cli(capsys, "--config", str(path), "allocate")
        assert code == 3
        assert "target_ber" in err

    def test_missing_config_file_is_generic_error(self, capsys):
        code, _, err = run_cli(capsys, "--config", "/nonexistent.cfg", "allocate")
        assert code == 1
        assert "error:" in err


class TestUsage:
    def test_no_subcommand_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == 2

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 2

    def test_help_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "--help")
        assert code == 0
        assert "sweep-fn" in out


def test_console_script_installed():
    import shutil
    assert shutil.which("ofdm-bitload") is not None
