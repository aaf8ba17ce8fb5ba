import json
import math
import subprocess
import sys

import numpy as np
import pytest

from virtspin import cli
from virtspin.compiler import supported_gates

KEYS = {
    "catalog": {"command", "gates"},
    "compile": {"command", "gate", "max_delta_m", "strategy", "program", "events", "n_pulses",
                "operator", "target", "distance", "phase", "printed_prefactor", "success"},
    "verify": {"command", "file", "target", "distance", "phase", "tol", "success", "operator",
               "target_matrix"},
    "simulate": {"command", "file", "initial_state", "n_events", "rho", "populations",
                 "max_coherence", "fid_12"},
    "run-dj": {"command", "oracle", "mode", "state_model", "classification", "output_phase", "fid",
               "weights", "steps", "oracle_calls", "alpha", "prepared_level"},
    "cost": {"command", "file", "omega0", "omegaq", "eta", "use_eta", "cost", "pulses"},
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def cplx(pair):
    return complex(*pair)


@pytest.fixture
def prog(tmp_path):
    def write(text, name="p.pp"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def test_compile_cnot12_json(capsys):
    code, doc, _ = run_json(capsys, "compile", "CNOT12")
    assert code == 0
    assert set(doc) == KEYS["compile"]
    assert doc["n_pulses"] == 7
    assert doc["distance"] <= 1e-12
    assert abs(cplx(doc["phase"]) - np.exp(1j * math.pi / 4)) <= 1e-12
    assert cplx(doc["printed_prefactor"]) == -1j
    assert len(doc["operator"]) == 4 and len(doc["operator"][0][0]) == 2


def test_compile_writes_program(capsys, tmp_path):
    out = tmp_path / "c.pp"
    code, text, _ = run(capsys, "compile", "NOT", "--max-dm", "1", "-o", str(out))
    assert code == 0
    body = out.read_text()
    assert body.endswith("\n") and "\r" not in body
    assert all(line.startswith("pulse") for line in body.splitlines())


def test_compile_unknown_and_unsupported(capsys):
    code, _, err = run(capsys, "compile", "FOO")
    assert code == 2 and "unknown gate" in err
    code, _, err = run(capsys, "compile", "H1R")
    assert code == 2 and "H2" in err


def test_run_dj_f11(capsys):
    code, out, _ = run(capsys, "run-dj", "--oracle", "f11", "--mode", "pulses")
    assert code == 0 and out.strip() == "constant"


def test_run_dj_json_pseudo_pure(capsys):
    code, doc, _ = run_json(capsys, "run-dj", "--oracle", "f01", "--mode", "pulses",
                            "--state-model", "pseudo-pure")
    assert code == 0 and doc["classification"] == "balanced"
    assert abs(cplx(doc["output_phase"]) + 1j) <= 1e-10
    assert doc["prepared_level"] == 2


def test_verify_wrong_program(capsys, prog):
    path = prog("pulse X 0 2 angle=pi\npulse X 1 3 angle=pi\n")
    code, out, err = run(capsys, "verify", path, "--target", "SWAP")
    assert code == 1
    assert "distance 1.000000e+00" in err
    assert "operator difference" in err


def test_verify_star_p6_and_ideal(capsys, prog):
    path = prog("pulse X 2 3 angle=pi\n")
    assert run(capsys, "verify", path, "--target", "STAR_P6")[0] == 0
    code, doc, _ = run_json(capsys, "verify", path, "--target", "CNOT12")
    assert code == 1 and doc["distance"] == pytest.approx(1 - 1 / math.sqrt(2))


def test_verify_b01_ideal_vs_realized(capsys, prog):
    path = prog("pulse X 1 3 angle=pi\n")
    assert run(capsys, "verify", path, "--target", "B01")[0] == 0
    assert run(capsys, "verify", path, "--target", "B01", "--ideal")[0] == 1


def test_parse_error_exit_code(capsys, prog):
    path = prog("pulse X 3 1 angle=pi\n")
    code, _, err = run(capsys, "verify", path, "--target", "CNOT12")
    assert code == 2 and "line 1, column 9" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", str(tmp_path / "nope.pp"))
    assert code == 2 and "cannot read" in err


def test_verify_rejects_gradient(capsys, prog):
    path = prog("grad\n")
    assert run(capsys, "verify", path, "--target", "E")[0] == 2


def test_simulate(capsys, prog):
    path = prog("pulse X 1 2 angle=pi\n")
    code, doc, _ = run_json(capsys, "simulate", path, "--state", "basis:1")
    assert code == 0
    assert np.allclose(doc["populations"], [0, 0, 1, 0])
    code, doc, _ = run_json(capsys, "simulate", path, "--state", "thermal")
    assert code == 0 and doc["max_coherence"] <= 1e-15
    assert run(capsys, "simulate", path, "--state", "basis:9")[0] == 2


def test_cost(capsys, prog):
    path = prog("pulse X 0 2 angle=pi\n")
    code, doc, _ = run_json(capsys, "cost", path, "--omega0", "1", "--omegaq", "0.1")
    assert code == 0 and doc["cost"] == pytest.approx(100 * math.pi)
    code, doc, _ = run_json(capsys, "cost", path, "--omega0", "1", "--omegaq", "0.1", "--eta", "0.5")
    assert doc["cost"] == pytest.approx(400 * math.pi)
    assert run(capsys, "cost", path, "--omega0", "-1", "--omegaq", "0.1")[0] == 2


def test_system_file(capsys, prog, tmp_path):
    cfg = tmp_path / "sys.cfg"
    cfg.write_text("# desk values\nomega0 = 2\nbeta = 1e-2\n")
    code, doc, _ = run_json(capsys, "run-dj", "--oracle", "f00", "--mode", "gate",
                            "--state-model", "pseudo-pure", "--system", str(cfg))
    assert code == 0 and doc["alpha"] == pytest.approx(-1e-2)
    cfg.write_text("omega0 2\n")
    assert run(capsys, "catalog", "--system", str(cfg))[0] == 0
    assert run(capsys, "run-dj", "--oracle", "f00", "--mode", "gate", "--system", str(cfg))[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "run-dj", "--oracle", "f05", "--mode", "gate")[0] == 2
    assert run(capsys, "compile", "CNOT12", "--max-dm", "3")[0] == 2


def test_json_schema_across_command_matrix(capsys, prog):
    path = prog("pulse X 0 1 angle=pi/2\npulse Y 2 3 angle=pi\n")
    matrix = [("catalog",), ("compile", "SWAP"), ("verify", path, "--target", "E"),
              ("simulate", path), ("cost", path, "--omega0", "1", "--omegaq", "0.1")]
    matrix += [("run-dj", "--oracle", f, "--mode", m, "--state-model", s)
               for f in ("f00", "f01", "f10", "f11") for m in ("gate", "single", "pulses")
               for s in ("pure", "pseudo-pure")]
    for argv in matrix:
        _, doc, _ = run_json(capsys, *argv)
        assert set(doc) == KEYS[doc["command"]], argv
    _, doc, _ = run_json(capsys, "catalog")
    assert {"id", "description", "matrix", "compilable", "printed_prefactor", "factorization"} == set(doc["gates"][0])


def test_round_trip_through_files(capsys, tmp_path):
    for g in supported_gates():
        out = tmp_path / f"{g.value}.pp"
        _, doc, _ = run_json(capsys, "compile", g.value, "-o", str(out))
        code, v, _ = run_json(capsys, "verify", str(out), "--target", g.value)
        assert code == 0
        assert abs(v["distance"] - doc["distance"]) <= 1e-12


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "virtspin", "run-dj", "--oracle", "f01", "--mode", "single"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "balanced"
