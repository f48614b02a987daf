"""CLI integration: subcommands, file formats, exit codes."""

import io
import json
import math

import pytest

from dtmseries import load_series
from dtmseries.cli import main


def run_cli(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        assert monkeypatch is not None
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


SQ_INPUT = '{"order":3,"coeffs":[1,1,0,0]}'


class TestOps:
    def test_pow_from_stdin(self, capsys, monkeypatch):
        code, out, err = run_cli(
            ["ops", "pow", "--m", "2", "--count"], capsys, SQ_INPUT, monkeypatch
        )
        assert code == 0
        assert json.loads(out) == {"order": 3, "coeffs": [1.0, 2.0, 1.0, 0.0]}
        assert err.strip() == "multiplies: 16"

    def test_pow_files(self, capsys, tmp_path):
        src = tmp_path / "in.json"
        dst = tmp_path / "out.json"
        src.write_text(SQ_INPUT)
        code, out, err = run_cli(
            ["ops", "pow", "--m", "2", "--in", str(src), "--out", str(dst)], capsys
        )
        assert code == 0
        assert out == ""
        assert json.loads(dst.read_text()) == {"order": 3, "coeffs": [1.0, 2.0, 1.0, 0.0]}

    def test_pow_naive_agrees(self, capsys, monkeypatch):
        code, out, _ = run_cli(["ops", "pow", "--m", "2"], capsys, SQ_INPUT, monkeypatch)
        code2, out2, _ = run_cli(
            ["ops", "pow", "--m", "2", "--naive"], capsys, SQ_INPUT, monkeypatch
        )
        assert code == code2 == 0
        assert out == out2

    def test_exp(self, capsys, monkeypatch):
        code, out, _ = run_cli(
            ["ops", "exp"], capsys, '{"order":2,"coeffs":[0,0,0]}', monkeypatch
        )
        assert code == 0
        assert json.loads(out) == {"order": 2, "coeffs": [1.0, 0.0, 0.0]}

    def test_exp_naive_count(self, capsys, monkeypatch):
        code, _, err = run_cli(
            ["ops", "exp", "--naive", "--count"],
            capsys,
            '{"order":4,"coeffs":[0,1,0,0,0]}',
            monkeypatch,
        )
        assert code == 0
        assert err.startswith("multiplies: ")

    def test_csv_input(self, capsys, monkeypatch):
        code, out, _ = run_cli(
            ["ops", "pow", "--m", "2"], capsys, "0,1.0\n1,2.5\n", monkeypatch
        )
        assert code == 0
        assert json.loads(out) == {"order": 1, "coeffs": [1.0, 5.0]}

    def test_output_round_trips_through_reader(self, capsys, monkeypatch):
        _, out, _ = run_cli(["ops", "pow", "--m", "3"], capsys, SQ_INPUT, monkeypatch)
        series = load_series(out)
        assert series.coeffs == (1.0, 3.0, 3.0, 1.0)

    def test_zero_to_the_zero_is_domain_error(self, capsys, monkeypatch):
        code, _, err = run_cli(
            ["ops", "pow", "--m", "0"], capsys, '{"order":3,"coeffs":[0,0,0,0]}', monkeypatch
        )
        assert code == 3
        assert "0^0" in err

    def test_malformed_json(self, capsys, monkeypatch):
        code, _, err = run_cli(["ops", "exp"], capsys, '{"order":2,"coeffs":[0,0]}', monkeypatch)
        assert code == 2
        assert "error" in err

    def test_garbage_input(self, capsys, monkeypatch):
        code, _, _ = run_cli(["ops", "exp"], capsys, "garbage[", monkeypatch)
        assert code == 2

    def test_bad_csv_index(self, capsys, monkeypatch):
        code, _, err = run_cli(["ops", "exp"], capsys, "0,1.0\n2,2.0\n", monkeypatch)
        assert code == 2
        assert "contiguous" in err

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, _ = run_cli(["ops", "exp", "--in", str(tmp_path / "nope.json")], capsys)
        assert code == 2

    def test_pow_requires_m(self, capsys, monkeypatch):
        code, _, _ = run_cli(["ops", "pow"], capsys, SQ_INPUT, monkeypatch)
        assert code == 2

    def test_negative_m_rejected(self, capsys, monkeypatch):
        code, _, _ = run_cli(["ops", "pow", "--m", "-2"], capsys, SQ_INPUT, monkeypatch)
        assert code == 2

    def test_m_meaningless_for_exp(self, capsys, monkeypatch):
        code, _, _ = run_cli(["ops", "exp", "--m", "2"], capsys, SQ_INPUT, monkeypatch)
        assert code == 2


class TestSolve:
    def test_exponential(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--eq", "D(u,1) = u", "--ic", "1", "--order", "5"], capsys
        )
        assert code == 0
        coeffs = json.loads(out)["coeffs"]
        want = [1.0, 1.0, 0.5, 1 / 6, 1 / 24, 1 / 120]
        assert max(abs(g - w) for g, w in zip(coeffs, want)) <= 1e-15

    def test_scaled_exp_equation(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--eq", "D(u,2) = -2 * exp(u)", "--ic", "0,3", "--order", "3"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["coeffs"] == [0.0, 3.0, -1.0, -1.0]

    def test_implicit_form_exits_2(self, capsys):
        code, _, err = run_cli(
            ["solve", "--eq", "D(u,1) = D(u,1)", "--ic", "1", "--order", "5"], capsys
        )
        assert code == 2
        assert "implicit form" in err

    def test_syntax_error_reports_position(self, capsys):
        code, _, err = run_cli(
            ["solve", "--eq", "D(u,1) = sin(u)", "--ic", "1", "--order", "5"], capsys
        )
        assert code == 2
        assert "position" in err

    def test_wrong_ic_count(self, capsys):
        code, _, _ = run_cli(
            ["solve", "--eq", "D(u,2) = u", "--ic", "1", "--order", "5"], capsys
        )
        assert code == 2

    def test_bad_ic_literal(self, capsys):
        code, _, _ = run_cli(
            ["solve", "--eq", "D(u,1) = u", "--ic", "1;2", "--order", "5"], capsys
        )
        assert code == 2

    def test_order_too_small(self, capsys):
        code, _, _ = run_cli(
            ["solve", "--eq", "D(u,2) = u", "--ic", "0,1", "--order", "0"], capsys
        )
        assert code == 2

    def test_overflow_is_domain_error(self, capsys):
        code, _, err = run_cli(
            ["solve", "--eq", "D(u,1) = exp(u)", "--ic", "710", "--order", "4"], capsys
        )
        assert code == 3
        assert "order 1" in err


class TestBratu:
    def test_happy_path(self, capsys, tmp_path):
        csv_path = tmp_path / "cmp.csv"
        json_path = tmp_path / "summary.json"
        code, out, err = run_cli(
            [
                "bratu", "--lambda", "1", "--order", "30", "--grid", "101",
                "--branch", "lower",
                "--out-csv", str(csv_path), "--out-json", str(json_path),
            ],
            capsys,
        )
        assert code == 0 and out == "" and err == ""
        summary = json.loads(json_path.read_text())
        assert set(summary) == {"lambda", "gamma", "theta", "residual", "max_abs_err", "order"}
        assert summary["order"] == 30
        assert abs(summary["residual"]) <= 1e-12
        assert summary["max_abs_err"] <= 1e-6
        assert abs(summary["gamma"] - summary["theta"] * math.tanh(summary["theta"] / 4)) <= 1e-6

        lines = csv_path.read_text().splitlines()
        assert lines[0] == "x,u_dtm,u_analytic,abs_err"
        assert len(lines) == 102
        first = lines[1].split(",")
        last = lines[-1].split(",")
        assert float(first[0]) == 0.0 and float(last[0]) == 1.0
        assert float(first[2]) == 0.0 and float(last[2]) == 0.0

    def test_summary_to_stderr_by_default(self, capsys):
        code, out, err = run_cli(
            ["bratu", "--lambda", "1", "--order", "10", "--grid", "3", "--branch", "lower"],
            capsys,
        )
        assert code == 0
        assert out.startswith("x,u_dtm,u_analytic,abs_err")
        assert json.loads(err)["order"] == 10

    def test_upper_branch_runs(self, capsys, tmp_path):
        json_path = tmp_path / "upper.json"
        code, _, _ = run_cli(
            [
                "bratu", "--lambda", "1", "--order", "30", "--grid", "11",
                "--branch", "upper", "--out-csv", str(tmp_path / "u.csv"),
                "--out-json", str(json_path),
            ],
            capsys,
        )
        assert code == 0
        upper = json.loads(json_path.read_text())
        assert upper["gamma"] > 0.6
        assert upper["theta"] > 10.0

    def test_no_branch_exits_4(self, capsys):
        code, _, err = run_cli(
            ["bratu", "--lambda", "5", "--order", "30", "--grid", "11", "--branch", "lower"],
            capsys,
        )
        assert code == 4
        assert "no" in err

    def test_lambda_range(self, capsys):
        for bad in ("0.0005", "11"):
            code, _, _ = run_cli(
                ["bratu", "--lambda", bad, "--order", "30", "--grid", "11", "--branch", "lower"],
                capsys,
            )
            assert code == 2

    def test_grid_and_order_validation(self, capsys):
        code, _, _ = run_cli(
            ["bratu", "--lambda", "1", "--order", "2", "--grid", "11", "--branch", "lower"],
            capsys,
        )
        assert code == 2
        code, _, _ = run_cli(
            ["bratu", "--lambda", "1", "--order", "30", "--grid", "1", "--branch", "lower"],
            capsys,
        )
        assert code == 2

    def test_invalid_branch_choice(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["bratu", "--lambda", "1", "--order", "30", "--grid", "11", "--branch", "mid"])
        assert err.value.code == 2
        capsys.readouterr()


class TestBench:
    def test_pow_counts(self, capsys):
        code, out, _ = run_cli(["bench", "--op", "pow", "--order", "64", "--m", "8"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["op"] == "pow" and report["order"] == 64 and report["m"] == 8
        assert report["count_naive"] == 15015
        assert report["ratio"] >= 3.0
        assert report["time_recurrence_ns"] > 0 and report["time_naive_ns"] > 0

    def test_pow_m2_count(self, capsys):
        _, out, _ = run_cli(["bench", "--op", "pow", "--order", "64", "--m", "2"], capsys)
        assert json.loads(out)["count_naive"] == 2145

    def test_exp_counts(self, capsys):
        code, out, _ = run_cli(["bench", "--op", "exp", "--order", "64"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["m"] is None
        assert report["count_recurrence"] <= report["count_naive"]

    def test_validation(self, capsys):
        assert run_cli(["bench", "--op", "pow", "--order", "-1"], capsys)[0] == 2
        assert run_cli(["bench", "--op", "pow", "--order", "8", "--reps", "0"], capsys)[0] == 2
        assert run_cli(["bench", "--op", "exp", "--order", "8", "--m", "3"], capsys)[0] == 2


class TestDeterminism:
    def test_ops_byte_identical(self, capsys, tmp_path):
        src = tmp_path / "in.json"
        src.write_text('{"order":6,"coeffs":[1.25,-0.5,0.125,0.75,-1.0,0.3,0.9]}')
        outs = []
        for name in ("a.json", "b.json"):
            dst = tmp_path / name
            code, _, _ = run_cli(
                ["ops", "pow", "--m", "5", "--in", str(src), "--out", str(dst)], capsys
            )
            assert code == 0
            outs.append(dst.read_bytes())
        assert outs[0] == outs[1]

    def test_solve_byte_identical(self, capsys, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            dst = tmp_path / name
            code, _, _ = run_cli(
                ["solve", "--eq", "D(u,2) = -1 * exp(u)", "--ic", "0,0.5",
                 "--order", "25", "--out", str(dst)],
                capsys,
            )
            assert code == 0
            outs.append(dst.read_bytes())
        assert outs[0] == outs[1]

    def test_bratu_byte_identical(self, capsys, tmp_path):
        pairs = []
        for tag in ("a", "b"):
            csv_path = tmp_path / f"{tag}.csv"
            json_path = tmp_path / f"{tag}.json"
            code, _, _ = run_cli(
                [
                    "bratu", "--lambda", "1", "--order", "20", "--grid", "41",
                    "--branch", "lower",
                    "--out-csv", str(csv_path), "--out-json", str(json_path),
                ],
                capsys,
            )
            assert code == 0
            pairs.append((csv_path.read_bytes(), json_path.read_bytes()))
        assert pairs[0] == pairs[1]

    def test_bench_counts_deterministic(self, capsys):
        reports = []
        for _ in range(2):
            _, out, _ = run_cli(["bench", "--op", "pow", "--order", "32", "--m", "4"], capsys)
            r = json.loads(out)
            reports.append((r["count_recurrence"], r["count_naive"], r["ratio"]))
        assert reports[0] == reports[1]
