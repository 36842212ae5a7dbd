import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

import gaussify as g
from gaussify.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestIterate:
    def test_schmidt_half_headline(self, capsys):
        code, out, _ = run_cli(["iterate", "schmidt:0.5", "--iters", "3"], capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == [
            "step",
            "step_prob",
            "cum_prob_product",
            "cum_prob_tree",
            "norm_sq",
            "fidelity",
            "tail_mass",
        ]
        assert len(rows) == 3
        assert float(rows[2][2]) > 0.5

    def test_vacuum_all_probabilities_one(self, capsys):
        code, out, _ = run_cli(["iterate", "schmidt:0.0", "--iters", "5"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 5
        assert all(float(r[1]) == 1.0 for r in rows)
        assert all(float(r[2]) == 1.0 for r in rows)

    def test_state_without_vacuum_amplitude_exits_domain(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        g.write_state(g.from_entries(1, {(1, 1): 1.0}), path)
        code, _, err = run_cli(["iterate", str(path), "--iters", "2"], capsys)
        assert code == 4
        assert "no Gaussian limit" in err

    def test_parse_error_exits_three(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("not a state file\n")
        code, _, err = run_cli(["iterate", str(path)], capsys)
        assert code == 3
        assert "line 1" in err

    def test_divergent_input_exits_domain(self, tmp_path, capsys):
        path = tmp_path / "grow.txt"
        g.write_state(g.from_entries(1, {(0, 0): 1.0, (1, 1): 1.5}), path)
        code, _, err = run_cli(
            ["iterate", str(path), "--iters", "12", "--cutoff", "32"], capsys
        )
        assert code == 4
        assert "diverged" in err or "not normalizable" in err

    def test_writes_outputs(self, tmp_path, capsys):
        out_csv = tmp_path / "report.csv"
        out_state = tmp_path / "final.txt"
        code, _, _ = run_cli(
            [
                "iterate",
                "schmidt:0.5",
                "--iters",
                "2",
                "--out",
                str(out_csv),
                "--state-out",
                str(out_state),
            ],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out_csv.read_text())
        assert len(rows) == 2
        final = g.read_state(out_state)
        assert final.amps[0, 0] == pytest.approx(1.0)

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["iterate"])  # missing state argument
        assert exc.value.code == 2


class TestSweep:
    def test_figure2_schema_and_vacuum_row(self, capsys):
        code, out, _ = run_cli(
            ["sweep", "--figure", "2", "--start", "0.0", "--stop", "0.5",
             "--points", "3", "--cutoff", "32"],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["lambda", "p1", "p2", "p3"]
        first = [float(x) for x in rows[0]]
        assert first == [0.0, 1.0, 1.0, 1.0]

    def test_figure3_fidelity_ordering(self, capsys):
        code, out, _ = run_cli(
            ["sweep", "--figure", "3", "--start", "0.05", "--stop", "0.6",
             "--points", "4", "--cutoff", "32"],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["lambda", "F1", "F2", "F3"]
        for row in rows:
            assert float(row[3]) > float(row[1])

    def test_figure4_schema(self, capsys, tmp_path):
        out_path = tmp_path / "fig4.csv"
        code, _, _ = run_cli(
            ["sweep", "--figure", "4", "--start", "0.1", "--stop", "0.5",
             "--points", "2", "--iters", "1", "--cutoff", "6",
             "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == [
            "T",
            "entanglement_ratio",
            "overall_probability",
            "purity",
            "T_squared",
        ]
        assert len(rows) == 2
        t_val = float(rows[0][0])
        assert float(rows[0][4]) == pytest.approx(t_val * t_val, rel=1e-9)

    def test_range_validation(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--figure", "2", "--start", "0.5", "--stop", "0.2",
                  "--points", "3"])
        assert exc.value.code == 2


class TestFixedPoint:
    def test_schmidt_half(self, capsys, tmp_path):
        out_path = tmp_path / "limit.txt"
        code, out, _ = run_cli(
            ["fixed-point", "schmidt:0.5", "--cutoff", "12", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert "spectral_norm = 0.5" in out
        assert "verdict = normalizable" in out
        limit = g.read_state(out_path)
        assert limit.amps[3, 3] == pytest.approx(0.125, abs=1e-12)

    def test_vacuum(self, capsys):
        code, out, _ = run_cli(["fixed-point", "schmidt:0.0"], capsys)
        assert code == 0
        assert "spectral_norm = 0" in out

    def test_not_normalizable_exit_differs_from_parse(self, tmp_path, capsys):
        path = tmp_path / "wide.txt"
        g.write_state(
            g.from_entries(2, {(0, 0): 1.0, (2, 0): 1.2 / math.sqrt(2)}), path
        )
        code, out, err = run_cli(["fixed-point", str(path)], capsys)
        assert code == 4
        assert "not normalizable" in out + err


class TestPrepareAndDistill:
    def test_prepare_schema(self, capsys):
        code, out, _ = run_cli(
            ["prepare", "--q", "0.02", "--cutoff", "6"], capsys
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header[:4] == ["q", "T", "click_probability", "purity"]
        assert float(rows[0][4]) < 0.05  # bell_distance column

    def test_distill_schema(self, capsys):
        code, out, _ = run_cli(
            ["distill", "--q", "0.01", "--T", "0.2", "--iters", "1",
             "--cutoff", "6"],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert "entanglement_ratio" in header
        ratio = float(rows[0][header.index("entanglement_ratio")])
        assert ratio > 1.0

    def test_bad_q_exits_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["prepare", "--q", "1.5"])
        assert exc.value.code == 2


def test_console_script_installed():
    result = subprocess.run(
        [sys.executable, "-m", "gaussify.cli", "iterate", "schmidt:0.3", "--iters", "1"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert result.stdout.startswith("step,")
