import csv
import io
import json

import pytest

from qradial import cli
from qradial.exactnum import cyclo_root
from qradial.identities import IdentityId, IdentityReport, Mismatch, run_suite
from qradial.numeric import PrecisionGuardError
from qradial.radial import RadialPath, radial_diff_report


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_identity_suite_json(capsys):
    code, out, _ = invoke(capsys, "identities", "--order", "40", "--w", "-1,z3,z4,z6",
                          "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 16
    assert all(d["status"] == "pass" and d["first_mismatch"] is None for d in data)
    assert set(data[0]) == {"identity", "order", "w", "status", "first_mismatch"}


def test_identity_json_round_trip(capsys):
    reports = run_suite(20, [cyclo_root(3, 1)], perturb={"RAMA1": (4, 2)})
    back = [cli.identity_from_json(json.loads(json.dumps(cli.identity_to_json(r))))
            for r in reports]
    assert back == reports


def test_failing_report_schema():
    rep = IdentityReport(IdentityId.TR1, 10, None, "fail", Mismatch(0, 1, 2))
    assert cli.identity_to_json(rep)["first_mismatch"] == {"n": 0, "lhs": "1", "rhs": "2"}
    ok = IdentityReport(IdentityId.TR1, 10, None, "pass")
    js = cli.identity_to_json(ok)
    assert js["status"] == "pass" and js["first_mismatch"] is None


def test_injected_defect_exits_one(capsys):
    code, out, _ = invoke(capsys, "identities", "--order", "30", "--w", "z4",
                          "--inject", "TR2:11:1", "--format", "json")
    assert code == 1
    bad = [d for d in json.loads(out) if d["status"] == "fail"]
    assert len(bad) == 1 and bad[0]["identity"] == "TR2"
    assert bad[0]["first_mismatch"]["n"] == 11


def test_limit_prints_exact_and_decimal(capsys):
    code, out, _ = invoke(capsys, "limit", "--a", "1", "--b", "2", "--h", "1", "--m", "4")
    assert code == 0
    assert "for3: 4·i" in out
    assert "4.0i" in out


def test_limit_json_contains_symbolic_and_decimal(capsys):
    code, out, _ = invoke(capsys, "limit", "--k", "3", "--h", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["for1"]["order"] == 6 and data["for1"]["coeffs"] == ["-4", "4"]
    assert data["for1"]["im"].startswith("3.46410161513775458705489268301174473388")


def test_radial_csv(capsys):
    code, out, _ = invoke(capsys, "radial", "--mode", "for1", "--k", "1", "--tmax", "8",
                          "--digits", "40", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    rows = list(csv.reader(io.StringIO("\n".join(l for l in lines if not l.startswith("#")))))
    assert rows[0] == ["t", "r", "re", "im"]
    assert rows[-1][0] == "8" and rows[-1][1] == "0.99609375"
    assert any(l.startswith("# agreement,") for l in lines)
    assert any(l.startswith("# extrapolated,3.9999") for l in lines)


def test_radial_tolerance_controls_exit_code(capsys):
    args = ["radial", "--mode", "for1", "--k", "1", "--tmax", "6", "--digits", "30"]
    assert invoke(capsys, *args, "--tol", "1e-1")[0] == 0
    assert invoke(capsys, *args, "--tol", "1e-12")[0] == 1


def test_radial_json_round_trip():
    rep = radial_diff_report("for1", 2, RadialPath(2, 6, 30))
    js = cli.radial_to_json(rep)
    assert set(js) >= {"samples", "extrapolated", "error_estimate", "exact_target", "agreement"}
    assert set(js["samples"][0]) == {"t", "r", "re", "im"}
    back = cli.radial_from_json(json.loads(json.dumps(js)))
    assert cli.radial_to_json(back) == js
    assert back.exact_target == rep.exact_target
    assert [s.t for s in back.samples] == [s.t for s in rep.samples]


def test_output_is_deterministic(capsys, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["quotient", "--a", "1", "--b", "2", "--h", "1", "--m", "4", "--tmax", "6",
            "--digits", "30", "--format", "json"]
    assert cli.run(args + ["--output", str(p1)]) == 0
    assert cli.run(args + ["--output", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_coeffs_and_qzeta(capsys):
    code, out, _ = invoke(capsys, "coeffs", "--series", "F", "--order", "6", "--format", "json")
    assert code == 0 and json.loads(out)["coeffs"] == ["1", "1", "-2", "3", "-3", "3", "-5"]
    code, out, _ = invoke(capsys, "qzeta", "--s", "10", "--order", "20")
    assert code == 0 and "264" in out and "Q*R" in out
    code, out, _ = invoke(capsys, "qzeta", "--s", "2", "--order", "20", "--format", "json")
    assert code == 0 and json.loads(out)["found"] is False


@pytest.mark.parametrize("argv", [
    ["identities", "--w", "q7"],
    ["identities", "--order", "20", "--inject", "NOPE:1"],
    ["identities", "--order", "20", "--inject", "TR1:50"],
    ["identities", "--order", "20", "--w", "z1"],
    ["limit", "--a", "1", "--b", "2"],
    ["limit", "--a", "2", "--b", "4", "--h", "1", "--m", "4"],
    ["radial", "--mode", "for1"],
    ["radial", "--mode", "sideways", "--k", "1"],
    ["radial", "--k", "1", "--tmin", "5", "--tmax", "4"],
    ["qzeta", "--s", "7"],
    ["coeffs", "--series", "NOPE"],
    ["coeffs", "--series", "RANK"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_unwritable_output_exits_two(capsys, tmp_path):
    target = tmp_path / "missing" / "out.txt"
    assert invoke(capsys, "limit", "--k", "1", "--output", str(target))[0] == 2


def test_precision_guard_exits_three(capsys, monkeypatch):
    def boom(*a, **k):
        raise PrecisionGuardError("needs more than 10 working digits")
    monkeypatch.setattr(cli, "radial_diff_report", boom)
    assert invoke(capsys, "radial", "--mode", "for1", "--k", "1")[0] == 3


def test_root_syntax():
    assert cli.parse_root("-1") == cyclo_root(2, 1)
    assert cli.parse_root("z6^5") == cyclo_root(6, 5)
    assert cli.root_label(cyclo_root(4, 1)) == "z4"
    assert cli.root_label(cyclo_root(2, 1)) == "-1"
