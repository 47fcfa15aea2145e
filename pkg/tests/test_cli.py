import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from jacobi_linfty.cli import run
from jacobi_linfty.ring import parse

DATA = Path(__file__).parent / "data"


def invoke(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


@pytest.mark.parametrize("name,code", [("darboux1.json", 0), ("zero.json", 0), ("corrupted.json", 1),
                                       ("conflict.json", 2)])
def test_check_jacobi_exit_codes(name, code):
    got, text = invoke("check-jacobi", DATA / name)
    assert got == code
    assert text.endswith({0: "result: PASS\n", 1: "result: FAIL\n", 2: "result: ERROR\n"}[code])


def test_failure_witness_is_parsable():
    _, text = invoke("check-jacobi", DATA / "corrupted.json")
    witnesses = [line.split(" = ", 1)[1] for line in text.splitlines() if line.strip().startswith("witness")]
    assert witnesses
    for w in witnesses:
        assert not parse(w, ("x1", "u", "p1")).is_zero()


def test_brackets_on_catalog_patches():
    code, text = invoke("brackets", DATA / "legendrian.json", "--max-arity", 5, "--expect-zero-from", 2)
    assert code == 0 and "m_2: zero on generators" in text
    code, text = invoke("brackets", DATA / "flowout.json", "--max-arity", 4, "--expect-zero-from", 3)
    assert code == 0 and "m_2: nonzero" in text
    code, _ = invoke("brackets", DATA / "flowout.json", "--max-arity", 3, "--expect-zero-from", 2)
    assert code == 1


def test_mc_command():
    code, text = invoke("mc", DATA / "legendrian.json", "--expect", "coisotropic")
    assert code == 0 and "coisotropic: yes" in text
    code, text = invoke("mc", DATA / "legendrian.json", "--section", '{"u": "x1", "p1": "0"}', "--expect",
                        "not-coisotropic")
    assert code == 0 and "coisotropic: no" in text
    code, _ = invoke("mc", DATA / "legendrian.json", "--section", '{"q": "1"}')
    assert code == 2


def test_formal_and_gauge_commands(tmp_path):
    assert invoke("formal", DATA / "flowout.json")[0] == 0
    assert invoke("formal", DATA / "flowout.json", "--order", 3)[0] == 0
    doc = json.loads((DATA / "flowout.json").read_text())
    doc["series"] = doc["series"][:1]
    truncated = tmp_path / "truncated.json"
    truncated.write_text(json.dumps(doc))
    code, text = invoke("formal", truncated)
    assert code == 0
    code, text = invoke("formal", truncated, "--order", 2)
    assert code == 1 and "first failing order 2" in text
    assert invoke("gauge", DATA / "gauge.json", "--order", 3)[0] == 0
    assert invoke("gauge", DATA / "gauge_bad.json", "--order", 3)[0] == 1


def test_poissonize_command():
    code, text = invoke("poissonize", DATA / "darboux1.json", "--seed", 7)
    assert code == 0 and "seed: 7" in text
    assert invoke("poissonize", DATA / "corrupted.json")[0] == 0


def test_ohpark_command():
    code, text = invoke("ohpark", DATA / "presymp.json")
    assert code == 0
    assert "W inverse: reference" in text and "jet order K: 4" in text


def test_malformed_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    for doc in ("{", "[]", '{"format": "other"}',
                '{"format": "jacobi-linfty/1", "base": ["x"], "J": {"bivector": {"x,q": "1"}}}',
                '{"format": "jacobi-linfty/1", "base": ["x", "y"], "J": {"bivector": {"x,y": "1 +"}}}',
                '{"format": "jacobi-linfty/1", "catalog": {"name": "nope"}}'):
        bad.write_text(doc)
        code, text = invoke("check-jacobi", bad)
        assert code == 2, doc
    assert invoke("check-jacobi", tmp_path / "missing.json")[0] == 2


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _, t1 = invoke("poissonize", DATA / "darboux1.json", "--seed", 3, "--out", a)
    _, t2 = invoke("poissonize", DATA / "darboux1.json", "--seed", 3, "--out", b)
    assert t1 == t2
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["result"] == "pass"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jacobi_linfty", "check-jacobi", str(DATA / "zero.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "conventions:" in proc.stdout
