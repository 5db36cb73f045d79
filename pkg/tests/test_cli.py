import json
import subprocess
import sys

import pytest

from qsphere.cli import run
from qsphere.qcore import QParams, tau
from qsphere.reps import load_matrix


def run_json(argv, capsys):
    code = run(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_relations_command_passes(capsys):
    code, report = run_json(
        ["relations", "--alg", "bl", "--l", "1", "--q", "0.5", "--N", "24"],
        capsys)
    assert code == 0
    assert report["checks"][0]["status"] == "pass"
    assert all(d["residual"] <= 1e-11
               for d in report["checks"][0]["details"])


def test_casimir_reports_spectrum(capsys):
    code, report = run_json(["casimir", "--x", "0.7", "--N", "16"], capsys)
    assert code == 0
    params = report["checks"][0]["params"]
    p = QParams(0.5)
    assert params["tau_lower"] == pytest.approx(tau(p, -0.3), abs=1e-15)
    assert params["tau_upper"] == pytest.approx(tau(p, 1.7), abs=1e-15)


def test_orbit_witness(capsys):
    code, report = run_json(["orbit", "--x", "0.3", "--y", "1.7"], capsys)
    assert code == 0
    assert report["checks"][0]["params"]["witness"] == -2


def test_orbit_failure_exit_code(capsys):
    assert run(["orbit", "--x", "0.3", "--y", "0.4"]) == 1


def test_picard_standard(capsys):
    code, report = run_json(["picard", "--x", "standard"], capsys)
    assert code == 0
    assert report["checks"][0]["params"]["group"] == "Z"


def test_usage_error_exit_code():
    assert run(["nonsense"]) == 2
    assert run(["orbit", "--x", "0.3"]) == 2


def test_json_deterministic(capsys):
    argv = ["casimir", "--x", "0.35", "--N", "16", "--json"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    second = capsys.readouterr().out
    assert first == second and first


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = run(["theta", "--l", "0.5", "--N", "16", "--json",
                "--out", str(path)])
    assert code == 0
    report = json.loads(path.read_text())
    assert report["checks"][0]["check"] == "theta"


def test_dump_writes_matrix_files(tmp_path, capsys):
    prefix = tmp_path / "dump"
    code = run(["relations", "--alg", "podles", "--x", "1.0", "--N", "12",
                "--dump", str(prefix)])
    assert code == 0
    M = load_matrix(f"{prefix}.podles.X.txt")
    assert M.shape == (24, 24)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qsphere", "picard", "--x", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "picard" in proc.stdout
