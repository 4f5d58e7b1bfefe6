import csv
import json

import pytest

from coopbandits.cli import run_cli


def run_and_capture(capsys, argv):
    code = run_cli(argv)
    out = capsys.readouterr().out
    return code, out


class TestGraphStats:
    def test_path6_values(self, capsys):
        code, out = run_and_capture(capsys, ["graph-stats", "--graph", "path:6",
                                             "--d", "2"])
        assert code == 0
        stats = json.loads(out)
        assert stats["alpha"] == 3
        assert stats["alpha_power_d"] == 2
        assert stats["diameter"] == 5
        assert stats["alpha_cap"] == 3

    def test_greedy_mode(self, capsys):
        code, out = run_and_capture(capsys, ["graph-stats", "--graph", "clique:50",
                                             "--d", "1", "--alpha-mode", "greedy"])
        assert code == 0
        assert json.loads(out)["alpha"] == 1


class TestBound:
    def test_theorem_one_value(self, capsys):
        code, out = run_and_capture(capsys, [
            "bound", "--theorem", "1", "--d", "1", "--K", "2", "--gamma", "0.5",
            "--N", "2", "--alpha", "1", "--T", "100"])
        assert code == 0
        assert abs(json.loads(out)["value"] - 54.551667588701225) < 1e-9

    def test_theorem_three(self, capsys):
        code, out = run_and_capture(capsys, [
            "bound", "--theorem", "3", "--dbar", "1", "--K", "2", "--eta", "0.01",
            "--N", "2", "--alpha", "1", "--T", "10000"])
        assert code == 0
        assert abs(json.loads(out)["value"] - 15946.243642473032) < 1e-6

    def test_single_delayed_includes_baseline_scale(self, capsys):
        code, out = run_and_capture(capsys, [
            "bound", "--theorem", "single", "--d", "4", "--K", "4",
            "--T", "10000", "--gamma", "0.125"])
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value"] - 1153.5682677732834) < 1e-6
        assert abs(payload["parallel_baseline_scale"] - (5 * 4 * 10000) ** 0.5) < 1e-9

    def test_bad_parameters_exit_nonzero(self, capsys):
        code, _ = run_and_capture(capsys, [
            "bound", "--theorem", "1", "--K", "2", "--T", "10", "--gamma", "2.0"])
        assert code == 2


class TestSimulate:
    def test_json_report(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run_and_capture(capsys, [
            "simulate", "--graph", "cycle:4", "--algo", "coop", "--K", "3",
            "--T", "120", "--d", "1", "--gamma", "0.5", "--seeds", "2",
            "--adversary", "shift:2:0.35:0.65", "--out", str(out_path),
            "--workers", "1"])
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["schema"] == 1
        assert report["seeds"] == [0, 1]
        assert report["config"]["gamma_resolved"] == 0.5
        assert "mean_regret" in report["results"]

    def test_rerun_byte_identical(self, capsys, tmp_path):
        argv = ["simulate", "--graph", "cycle:4", "--K", "3", "--T", "100",
                "--d", "1", "--gamma", "0.5", "--seeds", "2", "--workers", "1"]
        code_a, out_a = run_and_capture(capsys, argv)
        code_b, out_b = run_and_capture(capsys, argv)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_curve_csv(self, capsys, tmp_path):
        curve = tmp_path / "curve.csv"
        code, _ = run_and_capture(capsys, [
            "simulate", "--graph", "path:3", "--K", "2", "--T", "60", "--d", "1",
            "--gamma", "0.5", "--seeds", "1", "--curve", str(curve),
            "--workers", "1"])
        assert code == 0
        rows = list(csv.reader(curve.read_text().splitlines()))
        assert rows[0] == ["round", "avg_cum_regret"]
        assert len(rows) - 1 == 60

    def test_audit_mode_runs(self, capsys):
        code, out = run_and_capture(capsys, [
            "simulate", "--graph", "path:6", "--K", "2", "--T", "30", "--d", "2",
            "--gamma", "0.5", "--seeds", "1", "--audit", "--workers", "1"])
        assert code == 0
        assert json.loads(out)["messages"]["delivered"] > 0

    def test_coop2_cli(self, capsys):
        code, out = run_and_capture(capsys, [
            "simulate", "--graph", "path:4", "--algo", "coop2", "--K", "2",
            "--T", "40", "--d-list", "1,1,2,2", "--ttl-list", "2",
            "--gamma", "0.5", "--delta", "auto", "--seeds", "1",
            "--workers", "1"])
        assert code == 0
        assert json.loads(out)["config"]["delta"] == 1 / 40

    def test_invalid_config_exit_code(self, capsys):
        code, _ = run_and_capture(capsys, [
            "simulate", "--graph", "path:3", "--K", "2", "--T", "10",
            "--gamma", "0.5"])
        assert code == 2


class TestSweep:
    def test_csv_header_contract(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, _ = run_and_capture(capsys, [
            "sweep", "--graphs", "path:4", "--K", "2", "--T", "80",
            "--ds", "0,1", "--gammas", "0.5", "--seeds", "2",
            "--out", str(out_path), "--workers", "1"])
        assert code == 0
        rows = list(csv.reader(out_path.read_text().splitlines()))
        assert rows[0] == ["graph", "algo", "d", "K", "T", "gamma_mode",
                           "seed_count", "mean_regret", "se", "bound", "alpha",
                           "messages"]
        assert len(rows) == 3


class TestVerify:
    def test_passing_suite_exit_zero(self, capsys):
        code, out = run_and_capture(capsys, [
            "verify", "--suite", "equivalence", "--trials", "2"])
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_unknown_suite_rejected(self, capsys):
        code = run_cli(["verify", "--suite", "bogus"])
        assert code != 0


class TestUsage:
    def test_no_command_nonzero(self):
        assert run_cli([]) != 0

    def test_help_exits_zero(self):
        assert run_cli(["--help"]) == 0
