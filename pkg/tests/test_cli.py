"""
test_cli.py

Description:
    End-to-end tests of the command-line interface.
"""

# Standard libraries
import json

# Non-standard libraries
import pytest

# Custom libraries
from src.data import constants
from src.scripts import cs_vqe
from src.utils import contextuality_utils, io_utils


TOY = constants.TOY_HAMILTONIAN_JSON
PERES_MERMIN = constants.PERES_MERMIN_JSON


def run_json(capsys, argv):
    code = cs_vqe.run(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("path,expected", [(TOY, True),
                                           (PERES_MERMIN, True)])
def test_check_contextual(capsys, path, expected):
    code, verdict = run_json(capsys, ["check-contextual", "--input", path])
    assert code == 0
    assert verdict["contextual"] is expected
    assert len(verdict["triple"]) == 3


def test_check_noncontextual_part(capsys, tmp_path, toy_hamiltonian):
    H_noncon, _ = contextuality_utils.extract_noncontextual(toy_hamiltonian)
    path = str(tmp_path / "noncon.json")
    io_utils.save_hamiltonian(path, H_noncon)

    code, verdict = run_json(capsys, ["check-contextual", "--input", path])
    assert code == 0
    assert verdict["contextual"] is False
    assert (verdict["Z"], verdict["T"]) == (1, 6)
    assert sorted(verdict["clique_sizes"]) == [1, 2, 3]


def test_reduce_sweep(capsys):
    code, report = run_json(capsys, ["reduce", "--input", TOY,
                                     "--method", "seqrot"])
    assert code == 0
    assert report["method"] == "seqrot"
    assert [row["qubits"] for row in report["rows"]] == [0, 1, 2, 3, 4]
    assert report["rows"][0]["energy"] == pytest.approx(-2.47484, abs=1e-4)


def test_reduce_keep_csv(capsys):
    code = cs_vqe.run(["reduce", "--input", TOY, "--keep", "2", "--csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "qubits,terms,energy,delta_e"
    assert lines[1].startswith("2,8,")


def test_reduce_output_files(capsys, tmp_path):
    output = tmp_path / "report.json"
    code = cs_vqe.run(["reduce", "--input", TOY, "--keep", "3",
                       "--output", str(output), "--csv"])
    assert code == 0
    assert capsys.readouterr().out == ""
    report = io_utils.load_report(str(output))
    assert report["rows"][0]["terms"] == 14
    assert (tmp_path / "report.csv").exists()


def test_reduce_with_workers(capsys):
    _, serial = run_json(capsys, ["reduce", "--input", TOY, "--keep", "1"])
    code, parallel = run_json(capsys, ["reduce", "--input", TOY, "--keep",
                                       "1", "--workers", "2"])
    assert code == 0
    assert parallel["rows"][0]["energy"] == pytest.approx(
        serial["rows"][0]["energy"])
    assert parallel["rows"][0]["energy"] == pytest.approx(-2.6495, abs=1e-3)


def test_reduce_out_of_range(capsys):
    assert cs_vqe.run(["reduce", "--input", TOY, "--keep", "9"]) == 2


def test_eigensolve(capsys):
    code, result = run_json(capsys, ["eigensolve", "--input", TOY])
    assert code == 0
    assert result["method"] == "dense"
    assert result["n_terms"] == 14


def test_measure_plan(capsys):
    code, report = run_json(capsys, ["measure-plan", "--input", TOY,
                                     "--shots", "1000", "--epsilon", "0.01"])
    assert code == 0
    assert report["terms_before"] == 14
    assert sum(report["clique_sizes"]) == 14
    assert 1 <= report["ratio"] <= report["ratio_bound"] + 1e-12
    assert report["simulation"]["shots"] == 1000


@pytest.mark.parametrize("method", ["lcu", "seqrot"])
def test_demo_toy(capsys, method):
    code = cs_vqe.run(["demo", "toy", "--method", method])
    output = capsys.readouterr().out
    assert code == 0
    assert "All checks passed" in output
    assert "FAIL" not in output


def test_demo_peres_mermin(capsys):
    code = cs_vqe.run(["demo", "peres-mermin"])
    output = capsys.readouterr().out
    assert code == 0
    assert "quantum value   = 6" in output
    assert "classical bound = 4" in output


def test_usage_errors(capsys):
    assert cs_vqe.run(["demo", "unknown"]) == 1
    assert cs_vqe.run(["reduce"]) == 1
    assert cs_vqe.run([]) == 1


def test_invalid_input(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n_qubits": 4,
                                "terms": [["XZX", [1.0, 0.0]]]}))
    assert cs_vqe.run(["check-contextual", "--input", str(path)]) == 2
    assert cs_vqe.run(["eigensolve", "--input",
                       str(tmp_path / "missing.json")]) == 2
