import io
import json

import pytest

from hlskit.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_decide_member():
    code, out, _ = run("decide", "--dims", "1", "--p", "2", "--q", "4", "--lambda", "3/4")
    d = json.loads(out)
    assert code == 0 and d["member"] is True and d["rules"] == ["BASE"]
    assert d["homogeneity_defect"] == "0" and d["witnesses"] == [None]


def test_decide_counterexample():
    code, out, _ = run("decide", "--dims", "1,1", "--p", "2,3", "--q", "inf,3", "--lambda", "3/2")
    assert code == 0 and json.loads(out)["member"] is False


def test_decide_defect_reported():
    code, out, _ = run("decide", "--dims", "1", "--p", "2", "--q", "4", "--lambda", "7/5")
    d = json.loads(out)
    assert code == 0 and d["member"] is False and d["homogeneity_defect"] == "13/20"


@pytest.mark.parametrize("argv,needle", [
    (["decide", "--dims", "1", "--p", "2x", "--q", "4", "--lambda", "1"], "2x"),
    (["decide", "--dims", "1", "--p", "2", "--q", "4", "--lambda", "0.5"], "0.5"),
    (["decide", "--dims", "1", "--p", "2", "--q", "4"], "--lambda"),
    (["decide", "--dims", "1,1", "--p", "2", "--q", "4", "--lambda", "1"], "mismatch"),
    (["frobnicate"], "frobnicate"),
    ([], "command"),
])
def test_input_errors_exit_1(argv, needle):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and needle in err


def test_decide_hls():
    code, out, _ = run("decide-hls", "--dims", "1,1", "--p", "3/2,1", "--q", "3/2,2")
    d = json.loads(out)
    assert code == 0 and d["member"] and d["rules"] == ["O2"] and d["namespace"] == "omega"
    code, out, _ = run("decide-hls", "--dims", "1", "--p", "3/2", "--q", "3/2", "--via-gamma")
    d = json.loads(out)
    assert d["member"] and d["hls_lambda"] == "2/3" and d["namespace"] == "gamma"
    assert run("decide-hls", "--dims", "1", "--p", "1/2", "--q", "2", "--via-gamma")[0] == 1


def test_scan_m1():
    code, out, _ = run("scan", "--dims", "1")
    lines = out.split("\n")
    assert code == 0 and "\r" not in out and out.endswith("\n")
    assert lines[0] == "p1,q1,lambda,in_range,member,rule"
    rows = [l.split(",") for l in lines[1:] if l]
    assert len(rows) == 81
    from fractions import Fraction as F
    for p1, q1, lam, in_range, member, rule in rows:
        assert (member == "true") == (0 < F(q1) < F(p1) < 1)


def test_scan_fix_counterexample():
    code, out, _ = run("scan", "--dims", "1,1", "--fix", "q1=inf")
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 729
    assert all(r[6] == "false" for r in rows if r[1] == r[3])


def test_scan_json_and_out(tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = run("scan", "--dims", "1", "--grid", "0,1/2,1", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    rows = json.loads(path.read_text())
    assert len(rows) == 9 and rows[0]["lambda"] == "1"


@pytest.mark.parametrize("argv", [
    ["scan", "--dims", "1,1", "--fix", "q1"],
    ["scan", "--dims", "1,1", "--fix", "z1=2"],
    ["scan", "--dims", "1", "--grid", ""],
    ["scan", "--dims", "1", "--grid", "2"],
    ["scan", "--dims", "x"],
])
def test_scan_errors(argv):
    assert run(*argv)[0] == 1


def test_deterministic_output():
    argv = ["scan", "--dims", "1,1", "--grid", "0,1/3,1/2,1"]
    assert run(*argv)[1] == run(*argv)[1]


def test_verify_drift(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run("verify", "--suite", "drift", "--out", str(path), "--no-timestamp")
    assert code == 0 and "fitted_slope" in out and "overall: PASS" in out
    d = json.loads(path.read_text())
    assert d["passed"] and "timestamp" not in d
    code, out2, _ = run("verify", "--suite", "drift", "--out", str(path))
    assert out2 == out and "timestamp" in json.loads(path.read_text())


def test_verify_blowup_and_duality():
    code, out, _ = run("verify", "--suite", "blowup")
    assert code == 0 and "lambda=1 p=q=2" in out
    code, out, _ = run("verify", "--suite", "regions")
    assert code == 0


def test_verify_unknown_suite():
    assert run("verify", "--suite", "everything")[0] == 1


def test_verify_failure_exit_code(monkeypatch):
    from hlskit import suites
    monkeypatch.setitem(suites.SUITES, "drift", lambda: suites.SuiteResult("drift", False))
    assert run("verify", "--suite", "drift")[0] == 2


def test_kfun(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("2,0.5\n1,0.5\n")
    code, out, _ = run("kfun", "--input", str(path), "--t-min", "0.5", "--t-max", "2", "--points", "3")
    assert code == 0
    assert out == "t,K\n0.5,1\n1,1.5\n2,1.5\n"
    assert run("kfun", "--input", str(tmp_path / "missing"))[0] == 1
    path.write_text("2;0.5\n")
    assert run("kfun", "--input", str(path))[0] == 1
    assert run("kfun", "--input", str(path), "--t-min", "0")[0] == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
