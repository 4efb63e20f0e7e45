import json
import subprocess
import sys

import pytest

from matwaring.cli import main


def write(tmp_path, name, rows):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps({"n": len(rows), "entries": [[str(x) for x in r] for r in rows]}))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.mark.parametrize("n, k, r0, tag, code", [(3, 3, 2, "not_surjective", 0), (4, 2, 2, "surjective", 0), (5, 2, 3, "unknown", 3)])
def test_verdict(capsys, n, k, r0, tag, code):
    got, rep = run(capsys, "verdict", "--n", str(n), "--k", str(k), "--r0", str(r0))
    assert got == code and rep["verdict"] == tag
    assert rep["parameters"] == {"seed": 0, "precision": 256, "n": n, "k": k, "r0": r0}


def test_solve_and_not_in_image(capsys, tmp_path):
    I3 = write(tmp_path, "i", [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    J = write(tmp_path, "j", [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    E = write(tmp_path, "e", [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    C = write(tmp_path, "c", [[1, 2, 3], [4, 5, 6], [7, 8, "9+i"]])
    code, rep = run(capsys, "solve", "--a1", I3, "--a2", J, "--target", E, "--k", "3", "--deterministic")
    assert code == 2 and rep["status"] == "not_in_image" and rep["certificate"]
    code, rep = run(capsys, "solve", "--a1", I3, "--a2", J, "--target", C, "--k", "2", "--deterministic")
    assert code == 0 and rep["status"] == "solved"
    assert float(rep["residual"]) <= 2.0 ** -128
    assert rep["X1"]["exact"] is False and rep["X1"]["precision_bits"] == 256
    assert "elapsed_seconds" not in rep


def test_deterministic_output_is_stable(capsys, tmp_path):
    I2 = write(tmp_path, "i", [[1, 0], [0, 1]])
    J = write(tmp_path, "j", [[0, 1], [0, 0]])
    C = write(tmp_path, "c", [[1, "i"], [2, 3]])
    argv = ["solve", "--a1", I2, "--a2", J, "--target", C, "--k", "3", "--deterministic", "--seed", "5"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_timing_present_by_default(capsys):
    _, rep = run(capsys, "verdict", "--n", "3", "--k", "2", "--r0", "1")
    assert "elapsed_seconds" in rep


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("WARING_PRECISION", "128")
    _, rep = run(capsys, "verdict", "--n", "3", "--k", "2", "--r0", "1")
    assert rep["parameters"]["precision"] == 128
    _, rep = run(capsys, "verdict", "--n", "3", "--k", "2", "--r0", "1", "--precision", "512")
    assert rep["parameters"]["precision"] == 512


def test_low_precision_rejected(capsys):
    code, rep = run(capsys, "verdict", "--n", "3", "--k", "2", "--r0", "1", "--precision", "32")
    assert code == 64 and rep["error"] == "ValueError"


def test_jordan_root_ispower(capsys, tmp_path):
    M = write(tmp_path, "m", [[2, 1], [0, 2]])
    code, rep = run(capsys, "jordan", "--matrix", M)
    assert code == 0 and rep["blocks"] == [{"eigenvalue": "2", "size": 2}] and rep["r0"] == 0
    code, rep = run(capsys, "root", "--matrix", M, "--k", "2")
    assert code == 0 and float(rep["residual"]) < 1e-60
    N = write(tmp_path, "n", [[0, 1], [0, 0]])
    code, rep = run(capsys, "root", "--matrix", N, "--k", "2")
    assert code == 2 and rep["status"] == "not_a_power"
    code, rep = run(capsys, "ispower", "--matrix", N, "--k", "2")
    assert code == 2 and rep["is_kth_power"] is False
    code, rep = run(capsys, "ispower", "--matrix", M, "--k", "3")
    assert code == 0 and rep["is_kth_power"] is True


def test_certify(capsys, tmp_path):
    A2 = write(tmp_path, "a", [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    code, rep = run(capsys, "certify", "--a2", A2, "--k", "3", "--trials", "20")
    assert code == 0 and rep["all_obstructed"] is True and rep["obstructed"] == 20
    code, rep = run(capsys, "certify", "--a2", A2, "--k", "2")
    assert code == 64 and rep["error"] == "OutOfRegime"


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "entries": [["1/0"]]}')
    code, rep = run(capsys, "ispower", "--matrix", str(bad), "--k", "2")
    assert code == 64 and rep["error"] == "ParseError"


def test_singular_a1_exit(capsys, tmp_path):
    Z = write(tmp_path, "z", [[0, 0], [0, 0]])
    code, rep = run(capsys, "solve", "--a1", Z, "--a2", Z, "--target", Z, "--k", "2")
    assert code == 64 and rep["error"] == "Singular"


def test_usage_errors(capsys):
    assert main([]) == 64
    assert main(["verdict", "--n", "3"]) == 64
    assert main(["frobnicate"]) == 64


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "matwaring.cli", "verdict", "--n", "4", "--k", "3", "--r0", "2", "--deterministic"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "surjective"


def test_deterministic_bytes(tmp_path):
    I2 = write(tmp_path, "i", [[1, 0], [0, 1]])
    J = write(tmp_path, "j", [[0, 0], [0, 0]])
    C = write(tmp_path, "c", [[1, 2], ["i", 0]])
    argv = [sys.executable, "-m", "matwaring.cli", "solve", "--a1", I2, "--a2", J, "--target", C, "--k", "2", "--deterministic"]
    outs = [subprocess.run(argv, capture_output=True, check=False).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
