import json
import math
import re
import subprocess
import sys

import pytest

from coeffgap import cli, verify
from coeffgap.report import VerificationReport, dumps

STAMP = re.compile(r'"timestamp": "[^"]*"')


def run(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def strip(text):
    return STAMP.sub('"timestamp": ""', text)


# -- coeffs -------------------------------------------------------------------

def test_coeffs_golden_L(capsys):
    code, out, _ = run(["coeffs", "--family", "L", "--phi-over-pi", "0", "--order", "5"], capsys)
    assert code == 0
    assert out == "n,coefficient\n1,1.0\n2,1.0\n3,1.0\n4,1.0\n5,1.0\n"


def test_coeffs_golden_K(capsys):
    code, out, _ = run(["coeffs", "--family", "K", "--phi-over-pi", "0", "--order", "5"], capsys)
    assert code == 0
    assert out == "n,coefficient\n1,1.0\n2,2.0\n3,3.0\n4,4.0\n5,5.0\n"


def test_coeffs_quarter_turn(capsys):
    code, out, _ = run(["coeffs", "--family", "L", "--phi-over-pi", "1/4", "--order", "8"], capsys)
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    vals = [float(v) for _, v in rows]
    assert code == 0 and len(vals) == 8
    assert vals[1] == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    assert vals[2] == pytest.approx(1 / 3, abs=1e-15)
    assert vals[3] == pytest.approx(0, abs=1e-15)


def test_coeffs_arccos_matches_phi(capsys):
    _, a, _ = run(["coeffs", "--family", "L", "--arccos", "1/2", "--order", "6"], capsys)
    _, b, _ = run(["coeffs", "--family", "L", "--phi-over-pi", "1/3", "--order", "6"], capsys)
    assert [float(r.split(",")[1]) for r in a.split()[1:]] == pytest.approx(
        [float(r.split(",")[1]) for r in b.split()[1:]], abs=1e-15)


def test_coeffs_usage_errors(capsys):
    assert run(["coeffs", "--family", "L", "--order", "5"], capsys)[0] == 2
    assert run(["coeffs", "--family", "L", "--phi-over-pi", "0", "--arccos", "1"], capsys)[0] == 2
    assert run(["coeffs", "--family", "M", "--phi-over-pi", "0"], capsys)[0] == 2
    assert run(["coeffs", "--family", "kernel-file"], capsys)[0] == 2


def test_coeffs_kernel_file(tmp_path, capsys):
    k = tmp_path / "k.json"
    k.write_text(json.dumps({"atoms": [{"gamma": 1.0, "phi_over_pi": 0.0}]}))
    code, out, _ = run(["coeffs", "--family", "kernel-file", "--kernel", str(k), "--order", "4"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "n,coefficient,coefficient_imag"
    assert [float(r.split(",")[1]) for r in out.split()[1:]] == [1.0] * 4
    code, out, _ = run(["coeffs", "--family", "kernel-file", "--kernel", str(k),
                        "--generate", "starlike", "--order", "4"], capsys)
    assert [float(r.split(",")[1]) for r in out.split()[1:]] == [1.0, 2.0, 3.0, 4.0]


def test_coeffs_kernel_parse_error_has_line(tmp_path, capsys):
    k = tmp_path / "bad.json"
    k.write_text('{"atoms": [\n  {"gamma": 1.0,\n   "phi_over_pi": }\n]}')
    code, _, err = run(["coeffs", "--family", "kernel-file", "--kernel", str(k)], capsys)
    assert code == 2
    assert "line 3" in err


# -- toeplitz -----------------------------------------------------------------

def toeplitz(tmp_path, capsys, prefix, *extra):
    f = tmp_path / "prefix.json"
    f.write_text(json.dumps(prefix))
    return run(["toeplitz", "--in", str(f), *extra], capsys)


def test_toeplitz_boundary_prefix(tmp_path, capsys):
    code, out, _ = toeplitz(tmp_path, capsys, [1, -1, -2])
    rep = json.loads(out)
    assert code == 0 and rep["overall"] == "pass"
    d = [c["actual"] for c in rep["checks"]]
    assert d[0] == pytest.approx(3.0, abs=1e-12)
    assert d[1] == pytest.approx(0.0, abs=1e-12)
    assert d[2] == pytest.approx(0.0, abs=1e-12)


def test_toeplitz_zero_prefix(tmp_path, capsys):
    code, out, _ = toeplitz(tmp_path, capsys, [0, 0, 0])
    d = [c["actual"] for c in json.loads(out)["checks"]]
    assert code == 0
    assert d == pytest.approx([4.0, 8.0, 16.0])


def test_toeplitz_infeasible(tmp_path, capsys):
    code, out, _ = toeplitz(tmp_path, capsys, [2.5])
    assert code == 1
    assert json.loads(out)["overall"] == "fail"
    code, _, _ = toeplitz(tmp_path, capsys, [0, 1.9, 1.9])
    assert code == 1


def test_toeplitz_complex_entries(tmp_path, capsys):
    code, _, _ = toeplitz(tmp_path, capsys, [[0, 1], {"re": 0.5, "im": -0.5}])
    assert code == 0


def test_toeplitz_usage_errors(tmp_path, capsys):
    assert toeplitz(tmp_path, capsys, [])[0] == 2
    assert toeplitz(tmp_path, capsys, ["x"])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2,")
    assert run(["toeplitz", "--in", str(bad)], capsys)[0] == 2
    assert run(["toeplitz", "--in", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["toeplitz"], capsys)[0] == 2


# -- verify -------------------------------------------------------------------

def test_verify_constants(capsys):
    code, out, _ = run(["verify", "--target", "constants"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"command", "parameters", "checks", "overall", "timestamp"}
    assert set(rep["checks"][0]) == {"name", "expected", "actual", "tolerance", "status"}
    lam = next(c for c in rep["checks"] if c["name"] == "lambda_0")
    assert lam["actual"] == pytest.approx(0.3574, abs=5e-5)


def test_verify_lemY_seeded(capsys):
    code, out, _ = run(["verify", "--target", "lemY", "--samples", "50", "--seed", "7"], capsys)
    assert code == 0
    assert json.loads(out)["parameters"] == {"target": "lemY", "samples": 50, "seed": 7}


@pytest.mark.parametrize("target", ["thmA", "thmB", "lemF", "lemLZ"])
def test_verify_fast_targets_pass(target, capsys):
    assert run(["verify", "--target", target, "--samples", "60"], capsys)[0] == 0


def test_verify_failure_exit_code(monkeypatch, capsys):
    def failing(samples=0, seed=0):
        rep = VerificationReport("verify", {"target": "constants"})
        rep.close("impossible", 0.0, 1.0, 1e-9)
        return rep

    monkeypatch.setitem(verify.SUITES, "constants", failing)
    code, out, _ = run(["verify", "--target", "constants"], capsys)
    assert code == 1
    assert json.loads(out)["overall"] == "fail"


def test_verify_unknown_target(capsys):
    assert run(["verify", "--target", "thm9"], capsys)[0] == 2


def test_verify_deterministic(capsys):
    argv = ["verify", "--target", "thmA", "--samples", "40", "--seed", "3"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert strip(a) == strip(b)


def test_numbers_have_17_significant_digits():
    assert dumps({"x": 1 / 3}) == '{\n  "x": 0.33333333333333331\n}'
    with pytest.raises(ValueError):
        dumps([math.nan])


# -- scan-psi -----------------------------------------------------------------

def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "phi_over_pi,psi_n"
    return [tuple(map(float, line.split(","))) for line in lines[1:]]


def test_scan_psi_n2(tmp_path, capsys):
    out = tmp_path / "psi2.csv"
    assert run(["scan-psi", "--n", "2", "--points", "899", "--out", str(out)], capsys)[0] == 0
    rows = read_csv(out)
    assert len(rows) == 899
    top = max(rows, key=lambda r: r[1])
    assert top[0] == pytest.approx(1 / 3, abs=2e-3)
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["maximum"]["value"] == pytest.approx(0.5, abs=1e-9)
    assert side["maximum"]["phi_over_pi"] == pytest.approx(1 / 3, abs=1e-6)
    # theta_2 = pi/3 sits on the grid k/900
    row = next(r for r in rows if abs(r[0] - 1 / 3) < 1e-12)
    assert abs(row[1] - 0.5) <= 1e-12


def test_scan_psi_sidecar_and_stdout(tmp_path, capsys):
    side = tmp_path / "peak.json"
    code, out, _ = run(["scan-psi", "--n", "4", "--points", "999", "--out", "-",
                        "--sidecar", str(side)], capsys)
    assert code == 0
    assert out.startswith("phi_over_pi,psi_n\n") and out.count("\n") == 1000
    data = json.loads(side.read_text())
    assert data["maximum"]["phi_over_pi"] == pytest.approx(0.19834315, abs=1e-6)
    assert data["psi_at_theta_n"] == pytest.approx(0.25, abs=1e-12)


def test_scan_psi_errors(tmp_path, capsys):
    assert run(["scan-psi", "--n", "1"], capsys)[0] == 2
    assert run(["scan-psi", "--points", "5"], capsys)[0] == 2
    assert run(["scan-psi", "--out", str(tmp_path / "no" / "such" / "dir.csv")], capsys)[0] == 2


def test_scan_psi_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["scan-psi", "--n", "5", "--out", str(a)], capsys)
    run(["scan-psi", "--n", "5", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    assert strip(a.with_suffix(".json").read_text()) == strip(b.with_suffix(".json").read_text())


# -- optimize -----------------------------------------------------------------

def test_optimize_chart_point(capsys):
    code, out, _ = run(["optimize", "--kind", "diff", "--n", "2", "--p", "3/4"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["mode"] == "lz-chart"
    assert data["report"]["value"] == pytest.approx(25 / 48, abs=1e-9)


def test_optimize_sweep_coarse(capsys):
    code, out, _ = run(["optimize", "--kind", "diff", "--n", "2", "--p-grid", "81",
                        "--r-grid", "41", "--theta-grid", "64"], capsys)
    data = json.loads(out)
    assert code == 0 and data["mode"] == "lz-sweep"
    assert data["report"]["value"] == pytest.approx(25 / 48, abs=1e-6)
    assert data["report"]["argument"]["p"] == pytest.approx(0.75, abs=1e-4)


def test_optimize_herglotz_bracket(capsys):
    code, out, _ = run(["optimize", "--kind", "down", "--n", "5", "--seed", "1",
                        "--restarts", "16"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["lower_bound_only"] is True and "note" in data
    assert 1 / 5 < data["report"]["value"] < 1 / 3


def test_optimize_deterministic(capsys):
    argv = ["optimize", "--kind", "up", "--n", "4", "--seed", "5", "--restarts", "8",
            "--local-steps", "5"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert strip(a) == strip(b)


def test_optimize_usage_errors(capsys):
    assert run(["optimize", "--kind", "down", "--n", "1"], capsys)[0] == 2
    assert run(["optimize", "--kind", "down", "--n", "5", "--p", "1"], capsys)[0] == 2
    assert run(["optimize", "--kind", "down", "--n", "2", "--p", "3"], capsys)[0] == 2
    assert run(["optimize", "--kind", "side", "--n", "2"], capsys)[0] == 2
    assert run(["optimize", "--kind", "down", "--n", "2", "--p", "import os"], capsys)[0] == 2


def test_parse_real():
    assert cli.parse_real("(4+sqrt(70))/18") == pytest.approx((4 + math.sqrt(70)) / 18)
    assert cli.parse_real("3/8") == 0.375
    assert cli.parse_real("√2") == pytest.approx(math.sqrt(2))
    assert cli.parse_real("2*pi") == pytest.approx(2 * math.pi)


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "coeffgap", "coeffs", "--family", "K",
                           "--phi-over-pi", "1/2", "--order", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert [float(r.split(",")[1]) for r in proc.stdout.split()[1:]] == pytest.approx([1, 0, -1, 0], abs=1e-15)
    proc = subprocess.run([sys.executable, "-m", "coeffgap", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
