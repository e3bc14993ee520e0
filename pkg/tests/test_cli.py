from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from opcalc.cli import main

OPS = Path(__file__).resolve().parents[1] / "scripts" / "ops"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
    assert "usage: opcalc" in capsys.readouterr().out


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run"])
    assert info.value.code == 2


def test_grid_script_json(capsys):
    code, out, _ = run(capsys, "run", str(OPS / "grid_effective.ops"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["sections"][-1]["result"]["verdict"] == "effective-verified"


def test_falsified_script_exits_one(capsys):
    code, out, _ = run(capsys, "run", str(OPS / "dd2_falsify.ops"))
    assert code == 1
    assert "verdict: falsified" in out and "witness:" in out


def test_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.ops"
    bad.write_text("model seq N=4;\ndegree D nothing;\n")
    code, _, err = run(capsys, "run", str(bad))
    assert code == 2 and "line 2, column 1" in err
    code, _, err = run(capsys, "run", str(tmp_path / "missing.ops"))
    assert code == 2
    code, _, err = run(capsys, "run", str(OPS / "newton.ops"), "--grade", "six")
    assert code == 2 and "bad grade" in err


def test_seed_flag_and_env(capsys, monkeypatch):
    script = str(OPS / "grid_effective.ops")
    _, a, _ = run(capsys, "run", script, "--json", "--seed", "4", "--samples", "3")
    monkeypatch.setenv("OPCALC_SEED", "4")
    _, b, _ = run(capsys, "run", script, "--json", "--samples", "3")
    assert a == b and json.loads(a)["seed"] == 4
    monkeypatch.setenv("OPCALC_SEED", "oops")
    code, _, err = run(capsys, "run", script)
    assert code == 2 and "OPCALC_SEED" in err


def test_grade_flag(capsys):
    code, out, _ = run(capsys, "run", str(OPS / "newton.ops"), "--json", "--grade", "10")
    assert code == 0
    basis = json.loads(out)["sections"][-1]["result"]["basis"]
    assert len(basis[0]) == 10


@pytest.mark.parametrize("path", sorted(OPS.glob("*.ops")), ids=lambda p: p.name)
def test_reports_are_byte_identical(capsys, path):
    _, a, _ = run(capsys, "run", str(path), "--json", "--seed", "3")
    _, b, _ = run(capsys, "run", str(path), "--json", "--seed", "3")
    assert a == b


def test_check_suite(capsys):
    code, out, _ = run(capsys, "check", "newton")
    assert code == 0
    assert out.startswith("PASS  newton-n-squared")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "opcalc", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("opcalc ")
