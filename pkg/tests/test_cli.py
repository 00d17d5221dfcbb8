"""Command-line interface: argument handling, output schema, determinism,
and exit codes."""

import json
import math
import subprocess
import sys

import pytest

from mharmonic.cli import main, parse_grid_axis, parse_point


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsing:
    def test_complex_point(self):
        z = parse_point("0.3,0.2i", 2)
        assert z[0] == 0.3 and z[1] == 0.2j

    def test_zero_fill(self):
        z = parse_point("0.5", 3)
        assert list(z) == [0.5, 0.0, 0.0]

    def test_grid_axis(self):
        name, vals = parse_grid_axis("r1:0,0.9,10")
        assert name == "r1" and len(vals) == 10 and vals[-1] == 0.9


class TestEval:
    def test_disc_szego_value(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--kernel", "szego", "--n", "1", "--z", "0.3", "--w", "0.2i"], capsys
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tool_version"]
        rec = doc["records"][0]
        ref = (1 - 0.09 * 0.04) / abs(1 - 0.3 * (-0.2j)) ** 2 / (2 * math.pi)
        assert rec["value"]["re"] == pytest.approx(ref, rel=1e-9)
        assert "tail_estimate" in rec and "truncation_order" in rec

    def test_origin_dim2(self, capsys):
        code, out, _ = run_cli(["eval", "--kernel", "szego", "--n", "2", "--z", "0", "--w", "0"], capsys)
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert rec["value"]["re"] == pytest.approx(1 / (2 * math.pi**2), rel=1e-12)

    def test_bergman_origin(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--kernel", "bergman", "--s", "0", "--n", "2", "--z", "0", "--w", "0"], capsys
        )
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert rec["value"]["re"] == pytest.approx(2 / math.pi**2, rel=1e-11)

    def test_grid_mode(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--kernel", "szego", "--n", "2", "--grid", "r1:0,0.6,3", "r2:0,0.6,3"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["records"]) == 9
        assert [r["case"] for r in doc["records"]] == list(range(9))

    def test_invariant_grid_mode(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--kernel", "szego", "--n", "2", "--grid", "U:0.1,0.4,2", "V:0.1,0.4,2", "Z:0,0.1,2"],
            capsys,
        )
        assert code == 0
        assert len(json.loads(out)["records"]) == 8

    def test_domain_error_exit_code(self, capsys):
        code, _, err = run_cli(
            ["eval", "--kernel", "szego", "--n", "2", "--z", "1.2", "--w", "0"], capsys
        )
        assert code == 2
        assert "domain error" in err

    def test_workers_same_records(self, capsys):
        args = ["eval", "--kernel", "szego", "--n", "2", "--grid", "r1:0,0.5,4", "r2:0,0.5,4"]
        _, seq, _ = run_cli(args, capsys)
        _, par, _ = run_cli(args + ["--workers", "4"], capsys)
        assert json.loads(seq)["records"] == json.loads(par)["records"]


class TestCoeffs:
    def test_table_values(self, capsys):
        code, out, _ = run_cli(
            ["coeffs", "--n", "2", "--s", "0", "--pmax", "1", "--qmax", "1"], capsys
        )
        assert code == 0
        recs = json.loads(out)["records"]
        table = {(r["p"], r["q"]): r["c_pq"] for r in recs}
        assert table[(0, 0)] == pytest.approx(0.25, rel=1e-12)
        zeta3 = 1.2020569031595942854
        assert table[(1, 1)] == pytest.approx((96 * zeta3 - 115) / 4, rel=1e-10)

    def test_hardy_all_ones(self, capsys):
        code, out, _ = run_cli(["coeffs", "--hardy", "--n", "2", "--pmax", "2", "--qmax", "2"], capsys)
        assert code == 0
        assert all(r["c_pq"] == 1.0 for r in json.loads(out)["records"])

    def test_wallach_continuation(self, capsys):
        code, out, _ = run_cli(
            ["coeffs", "--wallach", "--n", "2", "--p", "1", "--q", "0", "--s", "-2.0"], capsys
        )
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert rec["f_pq"] == pytest.approx(0.5, rel=1e-10)

    def test_a_slice_and_asymptotic_columns(self, capsys):
        code, out, _ = run_cli(
            ["coeffs", "--n", "2", "--s", "0", "--pmax", "1", "--qmax", "1",
             "--a-slice", "0,0", "--asymptotic"],
            capsys,
        )
        assert code == 0
        recs = json.loads(out)["records"]
        by_index = {(r["p"], r["q"]): r for r in recs}
        assert by_index[(0, 0)]["a_pqjm"] == pytest.approx(4.0, rel=1e-11)
        assert "leading_ratio" in by_index[(1, 1)]

    def test_csv_projection(self, capsys):
        code, out, _ = run_cli(
            ["coeffs", "--hardy", "--n", "2", "--pmax", "1", "--qmax", "0", "--format", "csv"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "case,p,q,c_pq,tol"
        assert len(lines) == 3


class TestVerify:
    def test_small_suite_passes(self, capsys):
        code, out, err = run_cli(["verify", "--suite", "identity-6-5", "--seed", "7"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["failures"] == []
        assert all(rec["pass"] for rec in doc["records"])
        assert "[PASS]" in err

    def test_determinism_bytes(self):
        # two fresh processes must produce identical JSON
        cmd = [sys.executable, "-m", "mharmonic.cli", "verify", "--suite", "identity-6-5", "--seed", "7"]
        a = subprocess.run(cmd, capture_output=True, text=True)
        b = subprocess.run(cmd, capture_output=True, text=True)
        assert a.returncode == 0 and b.returncode == 0
        assert a.stdout == b.stdout

    def test_output_env_dir(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("MHARMONIC_OUTPUT_DIR", str(tmp_path))
        code, out, _ = run_cli(
            ["verify", "--suite", "identity-6-5", "--seed", "3", "--output", "report.json"], capsys
        )
        assert code == 0
        assert (tmp_path / "report.json").exists()
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["records"]
