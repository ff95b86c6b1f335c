import json
import os
import subprocess

import pytest

CLI = os.environ.get("FUETER_CLI", "fueter")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)


def run_json(*args):
    r = run(*args)
    return r.returncode, json.loads(r.stdout) if r.stdout.strip() else None, r.stderr


def test_kernel_is_regular():
    code, out, _ = run_json("check-regular", "--fn", "kernel", "--center", "2", "--samples", "200")
    assert code == 0
    assert out["passed"]
    assert out["max_residual"] < 1e-10


def test_identity_fails_with_residual_two():
    code, out, _ = run_json("check-regular", "--fn", "identity", "--samples", "20")
    assert code == 1
    assert not out["passed"]
    assert out["max_residual"] == pytest.approx(2.0)


def test_polynomial_file(tmp_path):
    spec = {
        "nvars": 1,
        "terms": [
            {"exponents": [0, 1, 0, 0], "coeff": [1, 0, 0, 0]},
            {"exponents": [1, 0, 0, 0], "coeff": [0, -1, 0, 0]},
        ],
    }
    path = tmp_path / "z1.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_json("check-regular", "--fn", str(path), "--samples", "50")
    assert code == 0
    assert out["max_residual"] == 0.0


def test_malformed_polynomial(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"nvars": 1, "terms": [{"exponents": [1, 0]}]}')
    r = run("check-regular", "--fn", str(path))
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"] == "BadSpec"


def test_unknown_function():
    r = run("check-regular", "--fn", "no_such_function")
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"] == "UnknownName"


def test_reconstruct_kernel():
    code, out, _ = run_json("reconstruct", "--fn", "kernel", "--center", "0,2", "--p0", "0.3")
    assert code == 0
    assert out["error"] < 1e-6


def test_reconstruct_on_the_sphere():
    r = run("reconstruct", "--fn", "constant", "--p0", "1")
    assert r.returncode == 1
    assert json.loads(r.stderr)["error"] == "PointOnOrOutsideSphere"


def test_taylor_polynomial_radius_is_infinite():
    code, out, _ = run_json("taylor", "--fn", "fueter_variable", "-N", "8")
    assert code == 0
    assert out["series"]["radius_estimate"] == "inf"
    assert out["radius_check"]["passed"]


def test_taylor_kernel_radius():
    code, out, _ = run_json("taylor", "--fn", "kernel", "--center", "2", "-N", "10", "--R", "2")
    assert code == 0
    check = out["radius_check"]
    assert check["estimate"] >= check["bound"]


def test_taylor_order_too_high():
    r = run("taylor", "--fn", "kernel", "--center", "2", "-N", "13", "--method", "fd")
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"] == "OrderTooHigh"


def test_extend_needs_a_domain():
    r = run("extend", "--fn", "product_regular")
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"] == "BadSpec"


def test_extend_infeasible_delta():
    r = run("extend", "--fn", "product_regular", "--domain", "model", "--delta", "1e-3")
    assert r.returncode == 3
    err = json.loads(r.stderr)
    assert err["error"] == "NoFeasibleEpsilon"
    assert err["delta"] == pytest.approx(1e-3)


def test_grid_csv():
    r = run("--format", "csv", "grid", "--resolution", "8")
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "node_x0,node_x1,node_x2,node_x3,weight,normal_x0,normal_x1,normal_x2,normal_x3"
    assert len(lines) == 1 + 2 * 8**3


def test_submean_single_function():
    code, out, _ = run_json("submean", "--fn", "product_regular", "--order", "4", "--n-theta", "64")
    assert code == 0
    assert out["violations"] == 0


def test_human_format():
    r = run("--format", "human", "check-regular", "--fn", "constant", "--samples", "10")
    assert r.returncode == 0
    assert "passed" in r.stdout


def test_bad_usage():
    assert run("no-such-command").returncode == 2
    assert run("check-regular").returncode == 2


def test_seed_determinism():
    a = run("--seed", "5", "check-regular", "--fn", "kernel", "--center", "2", "--samples", "30").stdout
    b = run("--seed", "5", "check-regular", "--fn", "kernel", "--center", "2", "--samples", "30").stdout
    c = run("--seed", "6", "check-regular", "--fn", "kernel", "--center", "2", "--samples", "30").stdout
    assert a == b
    assert a != c
