import csv
import io
import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from symforms.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


def test_norm_p3(capsys):
    code, doc, _ = run_json(capsys, "norm", "--in", FIX / "P3.json")
    assert code == 0 and abs(doc["value"] - 1) <= 1e-12


def test_norm_with_oracle(capsys):
    code, doc, _ = run_json(capsys, "norm", "--in", FIX / "T21.json", "--restarts", "4", "--seed", "3")
    assert code == 0 and abs(doc["bruteforce"]["value"] - doc["value"]) <= 1e-8


def test_witness_dyadic_and_rejection(capsys):
    code, doc, _ = run_json(capsys, "witness", "--tuple", FIX / "e1e1e2_real.json")
    assert code == 0 and doc["construction"] == "step1" and doc["defect"] <= 1e-9
    code, doc, err = run_json(capsys, "witness", "--tuple", FIX / "e1e2e3_real.json")
    assert code == 2 and doc is None
    assert err.startswith("symforms: error:") and err.count("\n") == 1


def test_diagonalize(capsys):
    code, doc, _ = run_json(capsys, "diagonalize", "--form", FIX / "bilinear_diag.json",
                            "--pair", FIX / "pair_06_08.json")
    assert code == 0
    eq = doc["equations"]
    assert abs(eq["T(f1,f1)"] - 1) <= 1e-8 and abs(eq["T(f2,f2)"] + 1) <= 1e-8 and abs(eq["T(f1,f2)"]) <= 1e-8


def test_pis_real_and_complex(capsys):
    code, doc, _ = run_json(capsys, "pis", "--tensor", FIX / "e1e1e2_real.json")
    assert code == 0 and abs(doc["value"] - 1) <= 1e-6
    code, doc, _ = run_json(capsys, "pis", "--tensor", FIX / "e1e1e2_complex.json")
    assert code == 0 and doc["certified_upper"] < 1 - 1e-3


def test_exposed_and_cgap(capsys):
    code, doc, _ = run_json(capsys, "exposed", "--form", FIX / "T21.json", "--tuple", FIX / "e1e1e2_real.json")
    assert code == 0 and doc["exposed"] is True
    code, doc, _ = run_json(capsys, "cgap", "--form", FIX / "P3.json", "--tuple", FIX / "e1e2e2_real.json")
    assert code == 0 and doc["strict"] and abs(doc["complex_norm"] - math.sqrt(2)) <= 1e-8


def test_verify_json_and_out_file(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, text, _ = run(capsys, "verify", "--suite", "uniqueness", "--trials", "1", "--seed", "2", "--out", out)
    assert code == 0 and text == ""
    doc = json.loads(out.read_text())
    assert doc["ok"] and doc["seed"] == 2 and doc["trials"] == 1


def test_global_flags_before_command(capsys):
    code, doc, _ = run_json(capsys, "--seed", "7", "verify", "--suite", "isometry", "--trials", "2",
                            "--restarts", "4")
    assert code == 0 and doc["seed"] == 7


def test_verify_csv(capsys):
    code, text, _ = run(capsys, "verify", "--suite", "isometry", "--trials", "2", "--restarts", "4",
                        "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["key", "value"]
    keys = {r[0] for r in rows[1:]}
    assert {"name", "ok", "pass", "trials"} <= keys


def test_verify_exit_codes(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "main", "--trials", "2", "--span", "3")
    assert code == 0 and doc["ok"]
    # exact agreement of two floating point routes is too strict a tolerance
    code, doc, _ = run_json(capsys, "verify", "--suite", "isometry", "--trials", "4", "--restarts", "2",
                            "--tol", "0")
    assert code == 1 and not doc["ok"] and doc["failures"]


def test_replay_reproduces_failure(capsys, tmp_path):
    from symforms.experiments import run_main_theorem_suite
    from symforms.serialize import dumps
    report = run_main_theorem_suite("real", 3, 3, trials=1, seed=0, span=3, gap=0.5)
    path = tmp_path / "report.json"
    path.write_text(dumps(report.to_dict()))
    code, doc, _ = run_json(capsys, "replay", "--in", path)
    assert code == 1 and doc["reproduced"] is True
    path.write_text(dumps(report.failures[0]))
    code, doc, _ = run_json(capsys, "replay", "--in", path)
    assert code == 1 and doc["reproduced"] is True


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["norm"],
    ["norm", "--in", "/nonexistent/form.json"],
    ["verify", "--suite", "nope"],
    ["verify", "--suite", "main", "--k", "2"],
    ["diagonalize", "--form", str(FIX / "bilinear_diag.json"), "--pair", str(FIX / "e1e1e2_real.json")],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("symforms: error:") and err.count("\n") == 1


def test_bad_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "norm", "--in", bad)
    assert code == 2 and "symforms: error:" in err


def test_unwritable_out(capsys):
    code, _, err = run(capsys, "norm", "--in", FIX / "P3.json", "--out", "/nonexistent/dir/out.json")
    assert code == 2 and "cannot write" in err


def test_console_script():
    exe = shutil.which("symforms")
    cmd = [exe] if exe else [sys.executable, "-m", "symforms.cli"]
    proc = subprocess.run(cmd + ["norm", "--in", str(FIX / "Q5.json")], capture_output=True, text=True,
                          timeout=120)
    assert proc.returncode == 0 and abs(json.loads(proc.stdout)["value"] - 1) <= 1e-12
    proc = subprocess.run(cmd + ["witness", "--tuple", str(FIX / "e1e2e3_real.json")], capture_output=True,
                          text=True, timeout=120)
    assert proc.returncode == 2 and proc.stderr.startswith("symforms: error:")
