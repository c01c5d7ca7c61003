"""CLI tests: in-process for speed, plus a few real subprocess runs."""

import io
import json
import subprocess
import sys

import pytest

from hopftransform.cli import main

GENERIC = ["--tau", "0,1", "--u=-0.7071067811865476", "--v", "0.5773502691896257"]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, _ = run(argv)
    return code, json.loads(out)


def test_reduce_example():
    code, env = run_json(["reduce", "--tau", "2.7,0.8"])
    assert code == 0
    assert env["schema_version"] == "1" and env["command"] == "reduce"
    re, im = env["result"]["tau_reduced"]
    assert abs(re - 0.4110) < 1e-4 and abs(im - 1.0959) < 1e-4
    assert env["result"]["matrix"] == [[0, -1], [1, -3]]
    assert env["params"] == {"tau": [2.7, 0.8]}


def test_motivic_example():
    code, env = run_json(["motivic", "blowup-p2", "--points", "9"])
    assert code == 0
    assert env["result"]["coefficients"] == [1, 10, 1]
    assert env["result"]["euler_characteristic"] == 12


def test_torsion_rejection_exit_2():
    code, env = run_json(["cobordants", "--tau", "0,1", "--u", "1/3", "--v", "1/2", "--count", "5"])
    assert code == 2
    assert env["error"]["hypothesis"] == "non-torsion"
    assert env["error"]["message"] == "normal bundle torsion (order 6)"
    # a six-digit decimal is itself an exact rational of large order
    code, env = run_json(["cobordants", "--tau", "0,1", "--u", "0.333333", "--v", "0.5", "--count", "5"])
    assert code == 2 and "normal bundle torsion" in env["error"]["message"]


@pytest.mark.parametrize(
    "argv",
    [
        ["reduce", "--tau", "1,-1"],
        ["reduce", "--tau", "abc"],
        ["reduce"],
        ["nonsense"],
        ["cobordants", *GENERIC, "--count", "0"],
        ["--format", "xml", "reduce", "--tau", "0,1"],
        ["motivic", "blowup-p2", "--points", "-1"],
    ],
)
def test_usage_errors_exit_64(argv):
    code, out, err = run(argv)
    assert code == 64 and out == "" and err


def test_precondition_from_library_exit_2():
    code, env = run_json(["to-hopf", "--tau", "0,1", "--u=-0.5", "--v", "0", "--u-rep", "0.5"])
    assert code == 2 and env["error"]["hypothesis"] == "negative-u-representative"


def test_cobordants_json_fields_and_warnings():
    code, env = run_json(["cobordants", *GENERIC, "--count", "3", "--nmax", "1000", "--max-degree", "5"])
    assert code == 0
    reps = env["result"]
    assert len(reps) == 3 and reps[0]["relation"] == "identity"
    first = reps[1]
    assert set(first) >= {"move", "graft_exponent", "graft_reduced", "graft_j", "target_bundle",
                          "torsion", "diophantine", "isogeny_to_source"}
    text = " ".join(env["warnings"])
    assert "1000000" in text and "1000" in text and "degree <= 5" in text


def test_cobordants_csv():
    code, out, _ = run(["--format", "csv", "cobordants", *GENERIC, "--count", "4", "--nmax", "200"])
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    for col in ("move_k", "move_l", "move_m", "move_n", "r", "neg", "graft_re", "graft_im",
                "j_re", "j_im", "torsion", "dioph_verdict", "isog_degree"):
        assert col in header
    assert len(lines) == 5
    assert any(l.startswith("# warning:") for l in out.splitlines())


def test_format_flag_after_subcommand():
    code, out, _ = run(["reduce", "--tau", "0,1", "--format", "csv"])
    assert code == 0 and out.startswith("# schema_version=1")


def test_output_is_deterministic():
    argv = ["cobordants", *GENERIC, "--count", "6", "--nmax", "500"]
    assert run(argv) == run(argv)


@pytest.mark.parametrize(
    "argv",
    [
        ["jinv", "--tau", "0,1"],
        ["class", *GENERIC],
        ["torsion", *GENERIC, "--bound", "1000"],
        ["diophantine", *GENERIC, "--nmax", "100"],
        ["to-hopf", *GENERIC],
        ["from-hopf", "--base", "0,1", "--fiber", "0.5,0.5"],
        ["classify-hopf", "--lambda", "0,1", "--mu", "0,2", "--bound", "5"],
        ["joint-hopf", "--tauE", "0,1", "--tauF", "0.70711,0.42265"],
        ["duals", *GENERIC, "--count", "3", "--nmax", "100"],
        ["compactifications", *GENERIC, "--count", "4"],
        ["k0an-witness", "--tauE", "0,1", "--tauF", "0,1.5", "--budget", "5"],
    ],
)
def test_every_command_runs(argv):
    code, env = run_json(argv)
    assert code == 0 and "result" in env


def test_jinv_value():
    _, env = run_json(["jinv", "--tau", "0,1"])
    assert abs(env["result"]["j"][0] - 1728) < 1e-9


def test_from_hopf_value():
    _, env = run_json(["from-hopf", "--base", "0,1", "--fiber", "0.5,0.5"])
    assert env["result"]["u"] == pytest.approx(-0.5) and env["result"]["v"] == pytest.approx(0.5)


def test_nine_points_and_structures(tmp_path):
    cfg = tmp_path / "nine.json"
    cfg.write_text(json.dumps({"tau": [0, 1], "points": [[0, 0]] * 8 + [[0.3, 0.4]]}))
    code, env = run_json(["nine-points", "--config", str(cfg)])
    assert code == 0
    nb = env["result"]["normal_bundle"]
    assert nb["u"] == pytest.approx(0.4) and nb["v"] == pytest.approx(-0.3)
    code, env = run_json(["structures", "--config", str(cfg), "--count", "2"])
    assert code == 2 and env["error"]["hypothesis"] == "non-torsion"
    code, env = run_json(["nine-points", "--config", str(tmp_path / "missing.json")])
    assert code == 2


def test_structures_generic(tmp_path):
    cfg = tmp_path / "nine.json"
    pts = [[2 ** 0.5 * k / 13, 3 ** 0.5 * k / 17 + 0.01] for k in range(1, 10)]
    cfg.write_text(json.dumps({"tau": [0.1, 1.2], "points": pts}))
    code, env = run_json(["structures", "--config", str(cfg), "--count", "3", "--nmax", "300"])
    assert code == 0 and len(env["result"]) == 3


def test_k0an_witness_example():
    argv = ["k0an-witness", "--tauE", "0,1", "--tauF", "0,1.5"]
    code, env = run_json(argv)
    assert code == 0
    w = env["result"]
    assert w["outcome"] == "witness" and w["candidates_tried"] <= 100
    assert len(w["checks"]) == 6 and all(c["passed"] for c in w["checks"])
    code, env = run_json(["k0an-witness", "--tauE", "0,1", "--tauF", "0,1.5", "--budget", "0"])
    assert code == 0 and env["result"]["outcome"] == "no witness found within budget"


def test_subprocess_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "hopftransform", "motivic", "blowup-p2", "--points", "9"],
        capture_output=True, text=True, check=False,
    )
    assert done.returncode == 0
    assert json.loads(done.stdout)["result"]["coefficients"] == [1, 10, 1]
    done = subprocess.run(
        [sys.executable, "-m", "hopftransform", "reduce", "--tau", "0,-1"],
        capture_output=True, text=True, check=False,
    )
    assert done.returncode == 64
