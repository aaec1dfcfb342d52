import io
import json
import subprocess
import sys

import pytest

from gkptools.cli import main
from gkptools.expr import evaluate, parse_complex, parse_real
from gkptools.errors import ValidationError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_code_distances():
    assert abs(run_json("code", "--tau", "i", "--d", "2")["distance"] - 0.70710678) < 1e-8
    assert abs(run_json("code", "--tau", "exp(2*pi*i/3)", "--d", "2")["distance"] - 3 ** -0.25) < 1e-11
    rep = run_json("code", "--code", "hexagonal")
    assert rep["D"] == [2] and rep["gram"] == [[0, 2], [-2, 0]]


def test_code_d1_is_domain_error():
    code, out, err = run("code", "--tau", "i", "--d", "1")
    assert code == 3 and out == ""
    assert json.loads(err)["error"] == "EmptyCoset"


def test_clifford():
    rep = run_json("clifford", "--code", "square", "--rotate", "pi/2")
    assert rep["U"] == [[0, -1], [1, 0]] and rep["logical"] == [[0, 1], [1, 0]]
    rep = run_json("clifford", "--code", "hexagonal", "--rotate", "-pi/3")
    assert rep["U"] == [[0, 1], [-1, 1]]
    rep = run_json("clifford", "--code", "square", "--U", "1,1,0,1")
    assert rep["g"] == [[1, 0], [1, 1]]
    code, _, err = run("clifford", "--code", "square", "--rotate", "pi/3")
    assert code == 3 and json.loads(err)["error"] == "NotAutomorphism"


def test_rademacher():
    assert run_json("rademacher", "--matrix", "3,2,1,1")["psi"] == 1
    assert run_json("rademacher", "--matrix", "4,1,3,1", "--mod", "11")["psi_mod_q"] in range(11)
    code, _, err = run("rademacher", "--matrix", "3,2,1,1", "--mod", "5")
    assert code == 3
    code, _, _ = run("rademacher", "--matrix", "1,2,3")
    assert code == 2


def test_stats_csv(tmp_path):
    out = tmp_path / "hist.csv"
    code, _, _ = run("stats", "--q", "7", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,count,density"
    assert len(lines) == 8
    rep = run_json("stats", "--q", "7")
    assert rep["group_order"] == 336


def test_linking_and_braid():
    assert run_json("linking", "--code", "square", "--d", "2", "--path", "rotate:pi/2")["linking"] == -3
    assert run_json("linking", "--code", "square", "--path", "shear:1")["linking"] == 1
    rep = run_json("braid", "--code", "square", "--path", "shear:1")
    assert rep["permutation"] == [1, 3, 2]
    code, _, err = run("linking", "--code", "square", "--path", "rotate:0.3")
    assert code == 3 and json.loads(err)["error"] == "NotClosed"


def test_reduce_and_modular():
    rep = run_json("reduce", "--tau", "0.3+0.1i")
    assert abs(rep["tau"]["re"]) < 1e-9 and abs(rep["tau"]["im"] - 1) < 1e-9
    rep = run_json("modular", "--tau", "0.3+1.2i", "--emit", "j,delta,g2,g3,e-roots")
    assert set(rep) == {"tau", "j", "delta", "g2", "g3", "e_roots"}
    assert abs(run_json("modular", "--tau", "i", "--emit", "j")["j"]["re"] - 1728) < 1e-6
    code, _, _ = run("modular", "--tau", "i", "--emit", "zeta")
    assert code == 2
    code, _, err = run("reduce", "--tau", "-1i")
    assert code == 3 and json.loads(err)["error"] == "NotUpperHalfPlane"


def test_curve_descriptor_roundtrip(tmp_path):
    out = tmp_path / "code.json"
    code, _, _ = run("curve", "--roots", "-1,0,1", "--d", "2", "--out", str(out))
    assert code == 0
    desc = json.loads(out.read_text())
    assert desc["n"] == 1 and desc["D"] == [2]
    rep = run_json("code", "--descriptor", str(out))
    assert abs(rep["distance"] - 2 ** -0.5) < 1e-12


def test_validation_errors_are_json():
    for argv in (["code", "--bogus"], ["stats"], ["code", "--tau", "1+"], ["nonsense"], []):
        code, out, err = run(*argv)
        assert code == 2 and out == ""
        obj = json.loads(err)
        assert obj["error"] == "ValidationError" and "\n" not in err.strip()


def test_deterministic_output():
    argv = ["modular", "--tau", "0.3+1.2i"]
    assert run(*argv)[1] == run(*argv)[1]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "gkptools", "rademacher", "--matrix", "2,1,1,1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["psi"] == 0


def test_expressions():
    assert evaluate("2pi") == 2 * 3.141592653589793
    assert parse_complex("0.3+1.2i") == 0.3 + 1.2j
    assert abs(parse_complex("rho") - parse_complex("exp(2*pi*i/3)")) < 1e-15
    assert parse_real("1e-5") == 1e-5
    for bad in ("__import__('os')", "x", "1/0", "9**9**9", "i", ""):
        with pytest.raises(ValidationError):
            parse_real(bad)
