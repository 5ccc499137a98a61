import json
import subprocess
import sys

import pytest

from forelli_rudin import asymptotics
from forelli_rudin.cli import main

STEIN = {"n": 1, "a": [0, 0], "b": [0, 0], "c": [2, 2], "alpha": [0, 0], "beta": [0, 0],
         "p": [2, 2], "q": [2, 2]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


@pytest.fixture
def cfg(tmp_path):
    def write(obj, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return write


def test_classify_json(capsys, cfg):
    code, out, _ = run(capsys, "classify", "--config", cfg({"params": STEIN}))
    assert code == 0
    res = json.loads(out)
    assert res["bounded"] is True and res["theorem_case"] == "interior"


def test_set_overrides(capsys, cfg):
    code, out, _ = run(capsys, "classify", "--config", cfg({"params": STEIN}), "--set", "params.c=[2.5,2]")
    assert code == 0 and json.loads(out)["bounded"] is False


def test_sweep_csv(capsys, cfg):
    conf = {"params": STEIN, "sweep": {"field": "c", "index": 0, "start": 1.5, "stop": 2.5, "steps": 11}}
    code, out, _ = run(capsys, "sweep", "--config", cfg(conf))
    assert code == 0
    lines = body(out)
    assert lines[0] == "value,bounded,theorem_case,branch,failures"
    flags = {float(r.split(",")[0]): r.split(",")[1] for r in lines[1:]}
    assert flags[2.0] == "true" and flags[2.1] == "false"


def test_output_file(tmp_path, capsys, cfg):
    out = tmp_path / "o.csv"
    code, printed, _ = run(capsys, "asymptotic", "--set", "c=3", "-o", str(out))
    assert code == 0 and printed == ""
    assert "# fit:" in out.read_text()


@pytest.mark.parametrize("argv,code", [
    (["classify", "--set", "params={}"], 1),
    (["classify", "--set", "params.n=1"], 1),
    (["asymptotic", "--set", "c=2", "--set", "t=-1.5"], 2),
    (["sweep", "--set", "sweep={\"start\": 1, \"stop\": 2, \"field\": \"zz\"}", "--set", "params=" + json.dumps(STEIN)], 1),
    (["schur-verify", "--set", "params=" + json.dumps({**STEIN, "alpha": [1, 0]})], 4),
    (["schur-verify", "--set", "params=" + json.dumps({**STEIN, "p": [3, 2]})], 2),
    (["project", "--set", "points=[[[0.9999999], [0]]]"], 2),
    (["berezin", "--set", "function={\"monomial\": [1]}", "--set", "points=[[[0.1],[0.2]]]"], 1),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error:")


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--config", str(tmp_path / "nope.json"))
    assert code == 1 and "config" in err


def test_accuracy_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(asymptotics, "_ORDERS", (2, 3))
    code, _, _ = run(capsys, "asymptotic", "--set", "c=3", "--set", "schedule=[1e-6]")
    assert code == 3


def test_error_names_field(capsys):
    _, _, err = run(capsys, "classify", "--set", "params=" + json.dumps({**STEIN, "alpha": [0, -2]}))
    assert "alpha" in err


def test_project_and_berezin(capsys):
    pts = "points=[[[0.3], [[0, 0.2]]], [[0.5], [0.1]]]"
    code, out, _ = run(capsys, "project", "--set", pts, "--set", 'function={"monomial": [2, 1]}')
    assert code == 0
    row = body(out)[1].split(",")
    assert float(row[1]) == pytest.approx(0.0, abs=1e-9) and float(row[2]) == pytest.approx(0.09 * 0.2, rel=1e-8)
    code, out, _ = run(capsys, "berezin", "--set", pts)
    assert code == 0
    assert all(float(r.split(",")[1]) == pytest.approx(1.0, abs=1e-8) for r in body(out)[1:])


def test_quad_selftest(capsys):
    code, out, _ = run(capsys, "quad-selftest", "--set", "samples=20000")
    assert code == 0 and "# passed: true" in out


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "forelli_rudin.cli", "classify", "--set",
                          "params=" + json.dumps(STEIN)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["bounded"]
