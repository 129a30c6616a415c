import json
import subprocess
import sys

import pytest

from mifkit import cli

ONE_ZERO = '{"zeros": [[0, 1]]}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mif_eval(capsys):
    code, out, _ = run(capsys, "mif", "eval", "--mif", ONE_ZERO, "--z", "2i")
    doc = json.loads(out)
    assert code == 0
    re, im = doc["result"]["values"][0]
    assert re == pytest.approx(1 / 3) and im == pytest.approx(0.0, abs=1e-15)
    assert doc["config"]["mif"] == ONE_ZERO and doc["config"]["tol"] == 1e-10


def test_mif_arg_csv(capsys):
    code, out, err = run(capsys, "mif", "arg", "--mif", ONE_ZERO, "--x", "0", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,arg" and float(lines[1].split(",")[1]) == pytest.approx(3.141592653589793)
    assert json.loads(err)["config"]["format"] == "csv"


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "mif", "eval", "--mif", ONE_ZERO, "--z", "i", "--bogus", "1")
    assert code == cli.EXIT_USAGE and "unrecognized" in err


def test_missing_subcommand(capsys):
    assert run(capsys, "clark")[0] == cli.EXIT_USAGE


def test_malformed_json_is_schema_error(capsys):
    code, _, err = run(capsys, "mif", "eval", "--mif", "{not json", "--z", "i")
    assert code == cli.EXIT_SCHEMA and "invalid JSON" in err


def test_unknown_field_is_schema_error(capsys):
    assert run(capsys, "mif", "eval", "--mif", '{"zeros": [], "colour": 1}', "--z", "i")[0] == cli.EXIT_SCHEMA


def test_lower_half_plane_zero_rejected(capsys):
    assert run(capsys, "mif", "eval", "--mif", '{"zeros": [[0, -1]]}', "--z", "i")[0] == cli.EXIT_SCHEMA


def test_numerical_error_exit_one(capsys):
    # a profile still rising at the right edge has no reliable majorant
    prof = json.dumps({"x": [0, 1, 2], "y": [0, 1, 2]})
    code, _, err = run(capsys, "bm", "kappa", "--profile", prof)
    assert code == cli.EXIT_ERROR and "BoundaryUncertain" in err


def test_kappa_verdict(capsys):
    prof = json.dumps({"x": [0, 1, 2, 3], "y": [0, -1, -2, -3]})
    code, out, _ = run(capsys, "bm", "kappa", "--profile", prof)
    assert json.loads(out)["result"]["verdict"] == "yes" and code == 0


def test_type_estimate_is_heuristic(capsys):
    mu = json.dumps({"atoms": [{"x": float(n), "mass": 1.0} for n in range(-50, 51)]})
    code, out, _ = run(capsys, "bm", "type", "--measure", mu)
    assert code == cli.EXIT_INCONCLUSIVE and json.loads(out)["result"]["estimate"] > 0


def test_clark_forward_lattice(capsys):
    code, out, _ = run(capsys, "clark", "forward", "--mif", '{"exp_mass": 6.283185307179586}',
                       "--window", "-3.5", "3.5")
    masses = [a["mass"] for a in json.loads(out)["result"]["atoms"]]
    assert code == 0 and len(masses) == 7 and masses == pytest.approx([1.0] * 7, abs=1e-10)


def test_clark_alpha_must_be_unimodular(capsys):
    assert run(capsys, "clark", "forward", "--mif", ONE_ZERO, "--alpha", "2")[0] == cli.EXIT_SCHEMA


def test_kernel_rational(capsys):
    code, out, _ = run(capsys, "kernel", "rational", "--I", '{"zeros": [[0, 1], [1, 2]]}',
                       "--J", '{"zeros": [[3, 1]]}')
    res = json.loads(out)["result"]
    assert code == 0 and res["dim"] == 1 and res["certified"]


def test_order_verdict_exact(capsys):
    code, out, _ = run(capsys, "order", "verdict", "--I", ONE_ZERO, "--J", '{"zeros": [[0, 1], [2, 1]]}')
    assert code == 0 and json.loads(out)["result"]["relation"] == "dominated"


def test_db_kernel_sinc(capsys):
    code, out, _ = run(capsys, "db", "kernel", "--E", '{"exp_mass": 3.141592653589793}',
                       "--lam", "0", "--z", "0.5")
    re, im = json.loads(out)["result"]["values"][0]
    assert code == 0 and re == pytest.approx(2 / 3.141592653589793, abs=1e-12)


def test_db_member(capsys):
    code, out, _ = run(capsys, "db", "member", "--E", '{"exp_mass": 3.141592653589793}', "--F", "sinc:0,1")
    assert code == 0 and json.loads(out)["result"]["member"] is True


def test_paper_example1(capsys):
    code, out, _ = run(capsys, "paper", "example", "1", "--seed", "4")
    assert code == 0 and json.loads(out)["result"]["all_match"]


def test_output_is_deterministic(capsys):
    argv = ["bm", "density", "--generator", "arith", "--params", '{"beta": 2.0}']
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a == b and a[0] == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "mifkit.cli", "mif", "eval", "--mif", ONE_ZERO, "--z", "i"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["values"][0] == pytest.approx([0.0, 0.0], abs=1e-15)
