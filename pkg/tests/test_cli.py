import json
import math

import pytest

from udbound import load_certificate, save_certificate, save_ensemble
from udbound.cli import main
from udbound.ensembles import build_two_pure
from udbound.operators import StateVector, basis_state


@pytest.fixture()
def example1_files(tmp_path):
    code = main(["example1", "--out", str(tmp_path)])
    assert code == 0
    return {
        "ensemble": tmp_path / "example1_ensemble.json",
        "global_measurement": tmp_path / "example1_measurement_global.json",
        "global_certificate": tmp_path / "example1_certificate_global.json",
        "locc_measurement": tmp_path / "example1_measurement_locc.json",
        "sep_certificate": tmp_path / "example1_certificate_sep.json",
        "cones": tmp_path / "example1_cones.json",
    }


class TestExampleCommands:
    def test_example1_writes_files(self, example1_files, capsys):
        for path in example1_files.values():
            assert path.exists()

    def test_example1_summary(self, tmp_path, capsys):
        assert main(["example1", "--out", str(tmp_path)]) == 0
        captured = capsys.readouterr().out
        assert "n=3" in captured and "2x2" in captured

    def test_example2_d3(self, tmp_path):
        assert main(["example2", "--d", "3", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "example2_d3_ensemble.json").exists()

    def test_example2_bad_d(self, tmp_path, capsys):
        assert main(["example2", "--d", "2", "--out", str(tmp_path)]) == 2
        assert "d must be >= 3" in capsys.readouterr().err


class TestSolveCommand:
    def test_global(self, example1_files, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            [
                "solve",
                "global",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--tol",
                "1e-8",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["status"] == "optimal"
        assert abs(payload["value"] - 0.75) < 1e-6

    def test_sep_bound(self, example1_files, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            [
                "solve",
                "sep-bound",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--cones",
                str(example1_files["cones"]),
                "--tol",
                "1e-8",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert abs(payload["value"] - 0.5) < 1e-6

    def test_sep_bound_without_cones(self, example1_files, capsys):
        code = main(["solve", "sep-bound", "--ensemble", str(example1_files["ensemble"])])
        assert code == 2
        assert "--cones" in capsys.readouterr().err

    def test_two_pure_global(self, tmp_path):
        plus = StateVector.normalized([1, 1], (2,))
        ensemble = build_two_pure(basis_state((2,), (0,)), plus, 0.5)
        path = tmp_path / "pair.json"
        save_ensemble(ensemble, path)
        out = tmp_path / "report.json"
        assert main(["solve", "global", "--ensemble", str(path), "--tol", "1e-8", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert abs(payload["value"] - (1 - 1 / math.sqrt(2))) < 1e-5

    def test_max_iterations_exit_code(self, example1_files):
        code = main(
            [
                "solve",
                "global",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--max-iter",
                "10",
                "--tol",
                "1e-16",
            ]
        )
        assert code == 3

    def test_missing_file_is_input_error(self, tmp_path):
        assert main(["solve", "global", "--ensemble", str(tmp_path / "nope.json")]) == 2


class TestVerifyCommand:
    def test_prop1_pass(self, example1_files, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            [
                "verify",
                "prop1",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--measurement",
                str(example1_files["global_measurement"]),
                "--certificate",
                str(example1_files["global_certificate"]),
                "--tol",
                "1e-8",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["verdict"] == "pass"
        assert abs(payload["value"] - 0.75) < 1e-12

    def test_prop1_doubled_certificate_fails(self, example1_files, tmp_path):
        cert = load_certificate(example1_files["global_certificate"])
        bad = tmp_path / "doubled.json"
        save_certificate(2.0 * cert, bad)
        out = tmp_path / "report.json"
        code = main(
            [
                "verify",
                "prop1",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--measurement",
                str(example1_files["global_measurement"]),
                "--certificate",
                str(bad),
                "--out",
                str(out),
            ]
        )
        assert code == 1
        payload = json.loads(out.read_text())
        assert payload["verdict"] == "fail"
        assert "7d" in payload["failing"]

    def test_cor3_example2(self, tmp_path):
        assert main(["example2", "--d", "3", "--out", str(tmp_path)]) == 0
        out = tmp_path / "report.json"
        code = main(
            [
                "verify",
                "cor3",
                "--ensemble",
                str(tmp_path / "example2_d3_ensemble.json"),
                "--measurement",
                str(tmp_path / "example2_d3_measurement_locc.json"),
                "--certificate",
                str(tmp_path / "example2_d3_certificate_sep.json"),
                "--cones",
                str(tmp_path / "example2_d3_cones.json"),
                "--tol",
                "1e-8",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert abs(payload["value"] - 0.2) < 1e-12

    def test_nlwe_witnessed(self, example1_files):
        code = main(
            [
                "verify",
                "nlwe",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--cones",
                str(example1_files["cones"]),
            ]
        )
        assert code == 0

    def test_malformed_certificate(self, example1_files, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dims": [2, 2], "matrix": "nope"}')
        code = main(
            [
                "verify",
                "prop1",
                "--ensemble",
                str(example1_files["ensemble"]),
                "--measurement",
                str(example1_files["global_measurement"]),
                "--certificate",
                str(bad),
            ]
        )
        assert code == 2


class TestTableCommand:
    def test_single_row(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        assert main(["table", "--d-min", "3", "--d-max", "3", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "d,dim,p_G,q_bound,nlwe_witnessed"
        fields = lines[1].split(",")
        assert fields[0] == "3" and fields[1] == "9"
        assert abs(float(fields[2]) - 0.4) < 1e-5
        assert abs(float(fields[3]) - 0.2) < 1e-5
        assert fields[4] == "true"

    def test_empty_range_header_only(self, tmp_path):
        out = tmp_path / "table.csv"
        assert main(["table", "--d-min", "4", "--d-max", "3", "--out", str(out)]) == 0
        assert out.read_text() == "d,dim,p_G,q_bound,nlwe_witnessed\n"

    def test_cap_exceeded(self, capsys, monkeypatch):
        monkeypatch.setenv("UDBOUND_DIM_CAP", "8")
        assert main(["table", "--d-min", "3", "--d-max", "3"]) == 2
        assert "exceeds cap" in capsys.readouterr().err


class TestDeterminism:
    def test_report_files_byte_identical(self, example1_files, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for out in (a, b):
            code = main(
                [
                    "solve",
                    "global",
                    "--ensemble",
                    str(example1_files["ensemble"]),
                    "--seed",
                    "7",
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
