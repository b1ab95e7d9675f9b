import json
import subprocess
import sys

import pytest

from lamplighter.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestCommands:
    def test_trace(self, capsys):
        assert run_json(capsys, "trace", "-p", "periodic", "E[1,1]")["trace"] == "0"
        assert run_json(capsys, "trace", "1/2 + t[0]")["trace"] == "1/2"

    def test_rank(self, capsys):
        data = run_json(capsys, "rank", "--level", "3", "J")
        assert data["results"] == [{"level": 3, "rank": "7/8", "rank_int": 7}]
        data = run_json(capsys, "rank", "--levels", "2..3", "1+J")
        assert [r["rank"] for r in data["results"]] == ["1", "1"]
        assert run_json(capsys, "rank", "(1 + R[0])/2")["rank"] == "1/2"
        data = run_json(capsys, "rank", "--level", "2", "F[1,1] - 1")
        assert data["results"][0]["rank"] == "1/2"

    def test_rank_limit(self, capsys):
        data = run_json(capsys, "rank-limit", "-e", "1/64", "J")
        assert (data["lower"], data["upper"], data["level_used"]) == ("251/256", "1", 8)

    def test_spectrum(self, capsys):
        data = run_json(capsys, "spectrum", "--level", "3", "--grid", "0,1", "J")
        rep = data["reports"][0]
        assert rep["atom_at_zero"] == "1/8" and rep["cdf"] == [[0.0, 0.125], [1.0, 1.0]]
        code, out, _ = run(capsys, "spectrum", "--levels", "2..3", "--grid", "0,1", "--format", "csv", "J")
        assert code == 0
        assert out.splitlines() == ["level,lambda,F", "2,0,0.25", "2,1,1", "3,0,0.125", "3,1,1"]

    def test_moments(self, capsys):
        data = run_json(capsys, "moments", "-k", "2", "--level", "3", "J")
        assert data["limit"] == ["1", "1"]
        assert [m["moment"] for m in data["levels"][0]["moments"]] == ["7/8", "7/8"]

    def test_psi_and_back(self, capsys):
        data = run_json(capsys, "psi", "E[2,1]*J")
        assert data["output"] == "F[2,1]*u" and data["orientation"] == 1
        assert run_json(capsys, "psi", "F[2,1]*u")["output"] == "E[2,1]*J"

    def test_kappa(self, capsys):
        assert run_json(capsys, "kappa", "t[0]*s")["output"] == "R[0]*s"
        assert run_json(capsys, "kappa", "R[1]")["output"] == "t[1]"

    def test_verify_axioms(self, capsys):
        data = run_json(capsys, "verify-axioms", "--samples", "6", "--level", "2")
        assert data["ok"] and data["violations_count"] == 0

    def test_oe_demo(self, capsys, tmp_path):
        data = run_json(capsys, "oe-demo", "--m", "1")
        assert data["ok"] and data["orbits1"] == [[0, 1]]
        actions = {
            "action1": {"points": [0, 1, 2, 3], "generators": {"f": [1, 0, 3, 2]}},
            "action2": {"points": [0, 1, 2, 3], "generators": {"f": [2, 3, 0, 1]}},
            "psi": [0, 2, 1, 3],
        }
        path = tmp_path / "actions.json"
        path.write_text(json.dumps(actions))
        assert run_json(capsys, "oe-demo", "--actions", str(path))["ok"]
        actions["psi"] = [0, 1, 2, 3]
        path.write_text(json.dumps(actions))
        code, out, _ = run(capsys, "oe-demo", "--actions", str(path))
        assert code == 1 and not json.loads(out)["ok"]

    def test_convergence(self, capsys):
        data = run_json(capsys, "convergence", "--levels", "3..5", "J + J*")
        steps = data["steps"]
        assert [(s["n"], s["m"]) for s in steps] == [(3, 4), (4, 5)]
        assert all(s["cdf"]["holds"] for s in steps)


class TestExitCodes:
    @pytest.mark.parametrize("argv", [["no-such-command"], ["rank-limit", "-e", "0", "J"]])
    def test_usage(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2

    @pytest.mark.parametrize(
        "argv,code,error",
        [
            (["trace", "J +"], 3, "syntax_error"),
            (["trace", "t[0]*J"], 4, "mixed_picture"),
            (["trace", "J/0"], 5, "zero_inverse"),
            (["rank", "--level", "1", "E[2,1]"], 5, "level_too_small"),
            (["rank", "t[0]"], 6, "unsupported"),
            (["spectrum", "--level", "2", "--grid=-1,0", "J"], 5, "domain_error"),
        ],
    )
    def test_errors(self, capsys, argv, code, error):
        got, out, err = run(capsys, *argv)
        assert got == code and out == ""
        assert json.loads(err)["error"] == error

    def test_syntax_error_position(self, capsys):
        _, _, err = run(capsys, "trace", "(1")
        assert json.loads(err)["position"] == 2


def test_output_is_byte_identical():
    cmd = [sys.executable, "-m", "lamplighter", "spectrum", "--level", "4", "(1 + E[1,1])/2*J + 3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["reports"][0]["level"] == 4
