import io
import json
import os
import subprocess
import sys

import pytest

from scatterlab import claims, cli
from scatterlab.scatter import MethodDisagreement


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def params_file(tmp_path, obj, name="params.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_classify_identity(capsys, tmp_path):
    p = params_file(tmp_path, {"f": {"monomials": [[0, 1]]}, "t": 2})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", p)
    assert code == 0
    rep = json.loads(out)
    assert rep["verdicts"] == {"scattered": False, "L_ps": False, "R_ps": False}
    assert rep["params"]["t"] == 2


def test_classify_from_stdin(capsys, monkeypatch):
    stdin = json.dumps({"f": {"monomials": [[1, 1]]}})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", "-", stdin=stdin, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["verdicts"]["scattered"]


def test_reproduce_binomial_claim(capsys):
    code, out, _ = run(capsys, "--task", "reproduce:binomial-q3-t2")
    assert code == 0
    rep = json.loads(out)
    assert rep["holds"]
    assert len(rep["table"]) == 8
    assert {"norm", "L_ps", "R_ps", "scattered"} <= set(rep["table"][0])


def test_solve_norm_t4(capsys, tmp_path):
    p = params_file(tmp_path, {"q": 3, "t": 4})
    code, out, _ = run(capsys, "--task", "solve_norm", "--params", p)
    assert code == 0
    rep = json.loads(out)
    assert rep["message"] == "no nontrivial solutions" and rep["count"] == 0


def test_solve_norm_scan(capsys, tmp_path):
    p = params_file(tmp_path, {"t": 2, "method": "scan", "d": 2})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "solve_norm", "--params", p)
    assert code == 0 and json.loads(out)["method"] == "scan"


def test_sweep_family(capsys, tmp_path):
    p = params_file(
        tmp_path,
        {"family": "binomial_2t", "params": {"s": 1}, "sweep": {"delta": "norm_classes"}},
    )
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "sweep_family", "--params", p)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 8
    assert sum(not r["verdicts"]["R_ps"] for r in rows) == 1


def test_sweep_family_listed_values(capsys, tmp_path):
    p = params_file(
        tmp_path,
        {"family": "binomial_2t", "params": {"s": 1}, "sweep": {"delta": [["g", 1], ["g", 10]]}},
    )
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "sweep_family", "--params", p)
    assert code == 0 and len(json.loads(out)["rows"]) == 2


def test_linset_task(capsys, tmp_path):
    p = params_file(tmp_path, {"f": {"monomials": [[1, 1]]}, "m": 2, "full": True, "verify": True})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "linset", "--params", p)
    assert code == 0
    rep = json.loads(out)
    assert rep["linear_set"]["size"] == 40 and len(rep["linear_set"]["points"]) == 40
    assert rep["theorem"]["holds"]


def test_code_analyze(capsys, tmp_path):
    p = params_file(tmp_path, {"kind": "C_square", "f": {"monomials": [[1, ["g", 1]], [3, 1]]}})
    code, out, _ = run(capsys, "--field", "2,1,4,2", "--task", "code_analyze", "--params", p)
    assert code == 0
    rep = json.loads(out)
    assert rep["d_min"] == 2 and rep["is_mrd"] and rep["defect"] == 0
    assert rep["idealisers"]["left"] == {"order": 16, "is_field": True}
    assert sum(rep["rank_distribution"].values()) == 4095


# -- exit codes ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("--task", "classify"),
        ("--field", "4,1,4,2", "--task", "classify"),
        ("--field", "3,1", "--task", "classify"),
        ("--field", "a,b,c", "--task", "classify"),
        ("--field", "3,1,4,2", "--task", "nosuch"),
        ("--task", "reproduce:nosuch"),
        ("--field", "3,1,4,2"),
    ],
)
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert "error" in json.loads(out)
    assert err.startswith("scatterlab:")


def test_unreadable_params(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", str(bad))
    assert code == 1
    code, _, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", str(tmp_path / "missing.json"))
    assert code == 1


def test_family_constraint_is_input_error(capsys, tmp_path):
    p = params_file(tmp_path, {"family": "binomial_2t", "params": {"s": 2, "delta": 1}})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "sweep_family", "--params", p)
    assert code == 1 and "constraint violated" in json.loads(out)["error"]


def test_budget_refusal_exit_code(capsys, tmp_path, monkeypatch):
    p = params_file(tmp_path, {"kind": "C_square", "f": {"monomials": [[1, 1], [3, 1]]}})
    code, _, err = run(capsys, "--field", "3,1,4,2", "--task", "code_analyze", "--params", p, "--budget", "100")
    assert code == 3 and "budget" in err
    monkeypatch.setenv("SCATTERLAB_BUDGET", "100")
    code, _, _ = run(capsys, "--field", "3,1,4,2", "--task", "code_analyze", "--params", p)
    assert code == 3


def test_disagreement_exit_code(capsys, tmp_path, monkeypatch):
    def broken(*a, **k):
        raise MethodDisagreement("routes differ")

    monkeypatch.setattr(cli, "classify", broken)
    p = params_file(tmp_path, {"f": {"monomials": [[1, 1]]}})
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", p)
    assert code == 2 and "routes differ" in json.loads(out)["error"]


def test_failed_claim_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(claims.RUNNERS, "trace-kernel-q3-t2", lambda **_: claims.ClaimResult("trace-kernel-q3-t2", {"x": False}))
    code, out, _ = run(capsys, "--task", "reproduce:trace-kernel-q3-t2")
    assert code == 2 and json.loads(out)["holds"] is False


def test_sampling_needs_seed(capsys, tmp_path):
    p = params_file(tmp_path, {"f": {"monomials": [[1, 1]]}, "method": "definitional"})
    code, _, err = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", p, "--budget", "10")
    assert code == 1 and "--seed" in err
    code, out, _ = run(capsys, "--field", "3,1,4,2", "--task", "classify", "--params", p, "--budget", "10", "--seed", "4")
    assert code == 0 and json.loads(out)["sampled"] is True


# -- registry, rendering, determinism -------------------------------------------------------


def test_list_claims(capsys):
    code, out, _ = run(capsys, "list-claims")
    entries = json.loads(out)
    assert code == 0 and len(entries) >= 10
    assert sorted(e["criterion"] for e in entries) == list(range(1, 12))
    assert all(e["statement"] and e["cost"] for e in entries)
    assert "est_seconds" not in entries[0]
    code, out, _ = run(capsys, "list-claims", "--dry-run")
    assert all("est_seconds" in e for e in json.loads(out))


def test_dry_run_does_not_execute(capsys, monkeypatch):
    monkeypatch.setitem(claims.RUNNERS, "idealisers", lambda **_: pytest.fail("claim was executed"))
    code, out, _ = run(capsys, "--task", "reproduce:idealisers", "--dry-run")
    rep = json.loads(out)
    assert code == 0 and rep["criterion"] == 9 and rep["est_seconds"] > 0


def test_pretty_and_out(capsys, tmp_path):
    dest = tmp_path / "report.txt"
    code, out, _ = run(capsys, "--task", "reproduce:binomial-q3-t2", "--pretty", "--out", str(dest))
    assert code == 0 and out == ""
    text = dest.read_text()
    assert "norm" in text and "---" in text
    code, out, _ = run(capsys, "list-claims", "--pretty")
    assert out.splitlines()[0].split()[:2] == ["id", "criterion"]


def _cli(*argv, env=None):
    return subprocess.run(
        [sys.executable, "-m", "scatterlab.cli", *argv],
        capture_output=True,
        env=dict(os.environ, **(env or {})),
        check=False,
    )


def test_output_is_byte_identical_across_runs_and_workers():
    a = _cli("--task", "reproduce:trinomial-q2-t2", "--workers", "1")
    b = _cli("--task", "reproduce:trinomial-q2-t2", "--workers", "1")
    c = _cli("--task", "reproduce:trinomial-q2-t2", "--workers", "3")
    assert a.returncode == b.returncode == c.returncode == 0
    assert a.stdout == b.stdout == c.stdout


def test_output_is_identical_across_backends(tmp_path):
    p = params_file(tmp_path, {"family": "binomial_2t", "params": {"s": 1}, "sweep": {"delta": "nonzero"}})
    argv = ("--field", "3,1,4,2", "--task", "sweep_family", "--params", p)
    fast = _cli(*argv)
    pure = _cli(*argv, env={"SCATTERLAB_PURE": "1"})
    assert fast.returncode == pure.returncode == 0
    assert fast.stdout == pure.stdout


def test_console_script_entry_point():
    from importlib.metadata import entry_points

    eps = [e for e in entry_points(group="console_scripts") if e.name == "scatterlab"]
    assert eps and eps[0].value == "scatterlab.cli:main"
