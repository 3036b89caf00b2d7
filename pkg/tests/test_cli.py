"""Command-line pipelines: outputs, determinism, exit codes."""

import csv
import json

import pytest

from drbottleneck.cli import main


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def generated(tmp_path):
    out = tmp_path / "gen"
    code = run_cli(
        "--model", "simulate", "--generator", "multihop",
        "--nodes", "6", "--samples", "10", "--seed", "11", "--out", str(out),
    )
    assert code == 0
    return {
        "instance": str(out) + ".instance.json",
        "scenarios": str(out) + ".scenarios.csv",
        "meta": str(out) + ".meta.json",
    }


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestSimulate:
    def test_writes_three_files(self, generated):
        meta = json.load(open(generated["meta"]))
        assert meta["generator"] == "multihop-shannon"
        assert meta["params"]["seed"] == 11
        instance = json.load(open(generated["instance"]))
        assert instance["type"] == "path"
        assert len(instance["edges"]) == 15

    def test_matching_generator(self, tmp_path):
        out = tmp_path / "match"
        assert run_cli(
            "--model", "simulate", "--generator", "matching-gaussian",
            "--side", "3", "--samples", "5", "--seed", "2", "--out", str(out),
        ) == 0
        instance = json.load(open(str(out) + ".instance.json"))
        assert instance == {"type": "assignment", "m": 3}


class TestQuantify:
    def test_capacity_grid_monotone(self, generated, tmp_path):
        out = tmp_path / "q"
        code = run_cli(
            "--model", "quantify", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"],
            "--theta-grid", "0,0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2",
            "--sense", "capacity", "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out) + ".csv")
        assert rows[0] == ["theta", "value", "time_sec"]
        assert len(rows) == 12  # header plus one row per grid radius
        values = [float(r[1]) for r in rows[1:]]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_csv_numbers_round_trip(self, generated, tmp_path):
        out = tmp_path / "q2"
        run_cli(
            "--model", "quantify", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"], "--theta", "0.05",
            "--sense", "capacity", "--out", str(out),
        )
        rows = read_csv(str(out) + ".csv")
        summary = json.load(open(str(out) + ".json"))
        assert float(rows[1][1]) == summary["results"][0]["value"]

    def test_deterministic_except_time(self, generated, tmp_path):
        outputs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            run_cli(
                "--model", "quantify", "--instance", generated["instance"],
                "--scenarios", generated["scenarios"], "--theta", "0.1",
                "--sense", "capacity", "--out", str(out),
            )
            rows = read_csv(str(out) + ".csv")
            outputs.append([row[:2] for row in rows])
        assert outputs[0] == outputs[1]


class TestDecide:
    def test_shift_identity_in_json(self, generated, tmp_path):
        out = tmp_path / "d"
        code = run_cli(
            "--model", "decide", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"], "--theta", "0.5", "--out", str(out),
        )
        assert code == 0
        summary = json.load(open(str(out) + ".json"))
        record = summary["results"][0]
        assert abs(record["shift_identity_gap"]) <= 1e-12
        assert record["objective"] == record["saa_objective"] + 0.5

    def test_matching_permutation_present(self, tmp_path):
        out = tmp_path / "m"
        run_cli(
            "--model", "simulate", "--generator", "matching-gaussian",
            "--side", "3", "--samples", "6", "--seed", "4", "--out", str(out),
        )
        dec = tmp_path / "mdec"
        code = run_cli(
            "--model", "robust-decide",
            "--instance", str(out) + ".instance.json",
            "--scenarios", str(out) + ".scenarios.csv",
            "--theta", "1.0", "--out", str(dec),
        )
        assert code == 0
        summary = json.load(open(str(dec) + ".json"))
        perm = summary["results"][0]["permutation"]
        assert sorted(perm) == [0, 1, 2]

    def test_tv_decide(self, generated, tmp_path):
        out = tmp_path / "tv"
        code = run_cli(
            "--model", "tv-decide", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"], "--d", "1.0", "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out) + ".csv")
        assert len(rows) == 2

    def test_gamma_models(self, tmp_path):
        gen = tmp_path / "gmatch"
        run_cli(
            "--model", "simulate", "--generator", "matching-gaussian",
            "--side", "2", "--samples", "6", "--seed", "8", "--out", str(gen),
        )
        instance = str(gen) + ".instance.json"
        scenarios = str(gen) + ".scenarios.csv"
        outq = tmp_path / "gq"
        code = run_cli(
            "--model", "gamma-quantify", "--instance", instance,
            "--scenarios", scenarios, "--theta", "0.2",
            "--gamma", "2", "--out", str(outq),
        )
        assert code == 0
        summary = json.load(open(str(outq) + ".json"))
        rec = summary["results"][0]
        assert rec["lower"] <= rec["upper"]
        outd = tmp_path / "gd"
        code = run_cli(
            "--model", "gamma-decide", "--instance", instance,
            "--scenarios", scenarios, "--theta", "0.2",
            "--gamma", "2", "--out", str(outd),
        )
        assert code == 0


class TestCalibrateModel:
    def test_selected_theta_reported(self, generated, tmp_path):
        out = tmp_path / "cal"
        code = run_cli(
            "--model", "calibrate", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"],
            "--theta-grid", "0,0.05,0.1,0.2,0.4,0.8",
            "--sense", "capacity", "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out) + ".csv")
        assert rows[0] == ["theta", "value", "time_sec", "ci_lower", "ci_upper"]
        summary = json.load(open(str(out) + ".json"))
        assert "selected_theta" in summary


class TestOracleModel:
    def test_all_checks_pass(self, generated, tmp_path, capsys):
        out = tmp_path / "oracle"
        code = run_cli(
            "--model", "oracle", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"], "--seed", "3", "--out", str(out),
        )
        assert code == 0
        assert "all checks passed" in capsys.readouterr().out


class TestErrorPaths:
    def test_missing_files(self, tmp_path, capsys):
        out = tmp_path / "x"
        code = run_cli(
            "--model", "quantify", "--instance", "/nonexistent.json",
            "--scenarios", "/nonexistent.csv", "--out", str(out),
        )
        assert code == 1
        assert "error kind=" in capsys.readouterr().err

    def test_bad_tv_radius(self, generated, tmp_path, capsys):
        out = tmp_path / "y"
        code = run_cli(
            "--model", "tv-decide", "--instance", generated["instance"],
            "--scenarios", generated["scenarios"], "--d", "3.0", "--out", str(out),
        )
        assert code == 1
        assert "kind=domain" in capsys.readouterr().err

    def test_scale_guard_exit_code(self, tmp_path, capsys):
        gen = tmp_path / "big"
        run_cli(
            "--model", "simulate", "--generator", "multihop", "--nodes", "17",
            "--samples", "2", "--seed", "1", "--out", str(gen),
        )
        out = tmp_path / "z"
        code = run_cli(
            "--model", "robust-decide", "--instance", str(gen) + ".instance.json",
            "--scenarios", str(gen) + ".scenarios.csv", "--theta", "0.1",
            "--out", str(out),
        )
        assert code == 2
        assert "kind=scale-guard" in capsys.readouterr().err

    def test_unreadable_scenarios(self, generated, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("0,1\nnot,numeric\n")
        out = tmp_path / "w"
        code = run_cli(
            "--model", "quantify", "--instance", generated["instance"],
            "--scenarios", str(bad), "--out", str(out),
        )
        assert code == 1
        assert "kind=parse" in capsys.readouterr().err


class TestFiniteOrderCli:
    def test_quantify_with_finite_q(self, tmp_path):
        instance = tmp_path / "tiny.json"
        instance.write_text(
            json.dumps({"type": "explicit", "n": 2, "sets": [[0], [0, 1]]})
        )
        scenarios = tmp_path / "tiny.csv"
        scenarios.write_text("0,1\n5.0,1.0\n")
        out = tmp_path / "fq"
        code = run_cli(
            "--model", "quantify", "--instance", str(instance),
            "--scenarios", str(scenarios), "--theta", "0.3", "--q", "1",
            "--out", str(out),
        )
        assert code == 0
        summary = json.load(open(str(out) + ".json"))
        # single relevant element: worst case moves it by the whole budget
        assert abs(summary["results"][0]["value"] - 5.3) < 1e-6
