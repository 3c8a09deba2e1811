import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from listprivacy import instance_to_text, uniform_qr, matrix_to_text
from listprivacy.catalog import instance as catalog_instance
from listprivacy.cli import main

SKEW7 = catalog_instance("skew7")
UNIFORM4 = catalog_instance("uniform4")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_catalog_instance(self, capsys):
        code, out, err = run(capsys, "validate", "skew7")
        assert code == 0 and err == ""
        assert out.splitlines()[0] == "r=7 k=2 l=3, preimages [3,4]"

    def test_instance_file(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(instance_to_text(UNIFORM4))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 0
        assert out.splitlines()[0] == "r=4 k=2 l=2, preimages [2,2]"

    def test_unknown_name(self, capsys):
        code, out, err = run(capsys, "validate", "missing")
        assert code == 1 and out == ""
        assert err.startswith("error: InstanceFormatError:")

    def test_unnormalized_pmf(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"pmf": ["1/2", "49/100"], "f": [0, 1], "l": 1}))
        code, _, err = run(capsys, "validate", str(path))
        assert code == 1
        assert err.startswith("error: PmfNotNormalized:")

    def test_function_value_out_of_range(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps({"pmf": ["1/2", "1/2"], "f": [0, 2], "l": 1, "k": 2})
        )
        code, _, err = run(capsys, "validate", str(path))
        assert code == 1
        assert err.startswith("error: BadFunctionRange:")


class TestCurve:
    def test_exact_format(self, capsys):
        code, out, _ = run(capsys, "curve", "skew7")
        assert code == 0
        payload = json.loads(out)
        assert payload["breakpoints"] == ["3/5", "2/3", "3/4"]
        assert len(payload["segments"]) == 4

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "curve", "uniform4", "--format", "csv")
        assert code == 0
        rows = out.strip().splitlines()
        assert rows[0].startswith("rho_lo,")
        assert len(rows) == 3

    def test_samples(self, capsys):
        code, out, _ = run(capsys, "curve", "ternary5", "--samples", "10")
        assert code == 0
        assert len(out.strip().splitlines()) == 12

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "curve.json"
        code, out, _ = run(capsys, "curve", "skew7", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["breakpoints"] == ["3/5", "2/3", "3/4"]


class TestMechanism:
    def test_deterministic_indicator(self, capsys):
        code, out, _ = run(capsys, "mechanism", "uniform4", "--kind", "deterministic")
        assert code == 0
        payload = json.loads(out)
        assert payload["rows"] == [
            ["1", "0"],
            ["1", "0"],
            ["0", "1"],
            ["0", "1"],
        ]

    def test_ternary_example_matrix(self, capsys):
        code, out, _ = run(
            capsys, "mechanism", "ternary5", "--kind", "ternary-example", "--rho", "3/4"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["rows"][4] == ["1/8", "1/8", "3/4"]

    def test_ternary_kind_rejects_other_instances(self, capsys):
        code, _, err = run(
            capsys, "mechanism", "uniform4", "--kind", "ternary-example", "--rho", "3/4"
        )
        assert code == 1 and "InstanceFormatError" in err

    def test_optimal_binary_requires_rho(self, capsys):
        code, _, err = run(capsys, "mechanism", "skew7", "--kind", "optimal-binary")
        assert code == 1 and "--rho" in err

    def test_noise_file(self, capsys, tmp_path):
        # Noise rows give the distribution of the added offset, so entry 0 is
        # the probability of releasing the true function value.
        noise = tmp_path / "noise.json"
        noise.write_text(json.dumps({"rows": [["3/4", "1/4"], ["3/4", "1/4"]]}))
        code, out, _ = run(
            capsys, "mechanism", "uniform4", "--kind", "noise-file", "--noise", str(noise)
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["rows"][0] == ["3/4", "1/4"]
        assert payload["rows"][3] == ["1/4", "3/4"]


class TestEval:
    def test_uniform_mechanism_at_half(self, capsys, tmp_path):
        mech_file = tmp_path / "w0.json"
        run(capsys, "mechanism", "skew7", "--kind", "uniform", "--output", str(mech_file))
        code, out, _ = run(
            capsys, "eval", "skew7", "--mechanism", str(mech_file), "--rho", "1/2"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["privacy"] == "7/20"
        assert payload["recoverable"] is True
        assert payload["privacy_bound"] == "7/20"
        assert payload["gap"] == "0"

    def test_digest_mismatch(self, capsys, tmp_path):
        mech_file = tmp_path / "w.json"
        mech_file.write_text(matrix_to_text(uniform_qr(UNIFORM4), UNIFORM4))
        code, _, err = run(capsys, "eval", "skew7", "--mechanism", str(mech_file))
        assert code == 1
        assert err.startswith("error: DigestMismatch:")

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "eval", "skew7", "--mechanism", "/no/such/file")
        assert code == 1 and "error:" in err


class TestOracle:
    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "oracle", "ternary5", "--rho", "3/4")
        assert code == 0
        payload = json.loads(out)
        assert payload["optimum"] == "1/4"
        assert len(payload["witness"]) == 5

    def test_grid_matches_envelope(self, capsys):
        code, out, _ = run(capsys, "oracle", "uniform4", "--grid", "5")
        assert code == 0
        rows = out.strip().splitlines()
        assert rows[0] == "rho,oracle,envelope,equal"
        assert len(rows) == 6
        assert all(row.endswith(",true") for row in rows[1:])

    def test_lp_dump(self, capsys, tmp_path):
        target = tmp_path / "program.lp"
        code, _, _ = run(
            capsys, "oracle", "uniform4", "--rho", "1/2", "--lp-dump", str(target)
        )
        assert code == 0
        assert "Minimize" in target.read_text()

    def test_requires_rho_or_grid(self, capsys):
        code, _, err = run(capsys, "oracle", "uniform4")
        assert code == 1 and "exactly one" in err


class TestSimulate:
    def test_deterministic_mechanism_is_exact(self, capsys, tmp_path):
        inst_file = tmp_path / "u4l3.json"
        inst_file.write_text(instance_to_text(UNIFORM4.with_list_size(3)))
        mech_file = tmp_path / "w1.json"
        run(
            capsys,
            "mechanism",
            str(inst_file),
            "--kind",
            "deterministic",
            "--output",
            str(mech_file),
        )
        code, out, _ = run(
            capsys,
            "simulate",
            str(inst_file),
            "--mechanism",
            str(mech_file),
            "--trials",
            "100000",
            "--seed",
            "42",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["misses"] == 0
        assert payload["analytic_privacy"] == "0"
        assert payload["abs_error"] == 0.0

    def test_sweep_csv(self, capsys):
        code, out, _ = run(
            capsys,
            "simulate",
            "uniform4",
            "--kind",
            "optimal-binary",
            "--grid",
            "3",
            "--trials",
            "2000",
            "--seed",
            "9",
        )
        assert code == 0
        rows = out.strip().splitlines()
        assert rows[0] == "rho,empirical,analytic,abs_error"
        assert len(rows) == 4
        assert rows[1].split(",")[0] == "0"
        assert rows[3].split(",")[0] == "1"

    def test_seed_is_required(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "uniform4", "--kind", "optimal-binary", "--grid", "3", "--trials", "10"])
        assert exc.value.code == 2

    def test_needs_mechanism_or_kind(self, capsys):
        code, _, err = run(capsys, "simulate", "uniform4", "--trials", "10", "--seed", "1")
        assert code == 1 and "--mechanism" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "listprivacy", "validate", "uniform4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "r=4 k=2 l=2, preimages [2,2]"


def test_console_script_help():
    proc = subprocess.run(
        [sys.executable, "-m", "listprivacy", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "validate" in proc.stdout and "oracle" in proc.stdout
