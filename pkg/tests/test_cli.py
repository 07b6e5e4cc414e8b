import json
import subprocess
import sys

import pytest

from twistkit import cli, suites
from twistkit.ring import Poly

QQ = Poly.gen("q")
FAST = ["--p", "2", "--levels", "2", "--samples", "2"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text,want",
    [
        ("q^2 - 3*q + 1", QQ ** 2 - 3 * QQ + 1),
        ("(q+1)**3", (QQ + 1) ** 3),
        ("-q", -QQ),
        ("7", Poly.const(7)),
    ],
)
def test_parse_poly(text, want):
    assert cli.parse_poly(text) == want


@pytest.mark.parametrize("text", ["q^-1", "x + 1", "q/2", "__import__('os')", "q +", "1.5*q", "q^q"])
def test_parse_poly_rejects(text):
    with pytest.raises(cli.UsageError):
        cli.parse_poly(text)


def test_verify_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "witt", *FAST)
    assert code == 0
    report = json.loads(out)
    assert report["suites"] == ["witt"]
    assert report["checks"] and all(c["status"] in ("pass", "info") for c in report["checks"])
    dest = tmp_path / "r.md"
    code, out, _ = run(capsys, "verify", "gns", "--range", "6", "--samples", "2", "--format", "markdown", "--output", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().startswith("| check | status | samples |")


def test_verify_failure_exits_one(capsys, monkeypatch):
    bad = {"check_id": "x.bad", "status": "fail", "samples": 1, "counterexample": {"k": 1}}
    monkeypatch.setitem(suites.SUITE_FUNCS, "witt", lambda cfg: [bad])
    code, out, err = run(capsys, "verify", "witt")
    assert code == 1
    assert json.loads(out)["summary"] == {"fail": 1}
    assert "x.bad" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nosuch"],
        ["verify", "witt", "--model", "nosuch"],
        ["verify", "witt", "--levels", "0"],
        ["compute", "twisted-power", "--x", "q^-2"],
        ["compute", "epsilon", "--a", "1,2,3"],
        [],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("twistkit:") or "usage" in err


def test_bad_config_exits_two(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert run(capsys, "verify", "witt", "--config", str(cfg))[0] == 2
    cfg.write_text('{"mystery": 1}')
    assert run(capsys, "verify", "witt", "--config", str(cfg))[0] == 2
    assert run(capsys, "verify", "witt", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_config_file_is_used(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"primes": [3], "levels": 1, "samples": 2, "seed": 4}))
    code, out, _ = run(capsys, "verify", "witt", "--config", str(cfg))
    assert code == 0
    report = json.loads(out)
    assert report["config"]["primes"] == [3] and report["config"]["seed"] == 4


def test_compute_twisted_power(capsys):
    code, out, _ = run(capsys, "compute", "twisted-power", "--n", "2", "--spec", "q-analog", "--x", "q", "--y", "1")
    assert code == 0
    res = json.loads(out)
    # (q - 1)(q - q) = 0
    assert res["value"] == "0"
    assert cli.parse_poly(res["twisted_power"].replace("x", "q").replace("y", "1")) == Poly.const(0)


def test_compute_norm(capsys):
    code, out, _ = run(capsys, "compute", "norm", "--m", "3", "--n", "2", "--f", "q+1")
    assert code == 0
    res = json.loads(out)
    assert sorted(res["transversal"], key=int) == ["1", "2", "3", "6"]
    # (q + 1)^3 at q = 1
    assert res["transversal"]["1"] == "8"
    value = cli.parse_poly(res["value"])
    assert value.evaluate(1) == 8


def test_compute_epsilon(capsys):
    code, out, _ = run(capsys, "compute", "epsilon", "--p", "2", "--a", "q,1")
    assert code == 0
    res = json.loads(out)
    assert res["a"] == ["q", "1"] and len(res["epsilon"]) == 2


def test_goldens_check(capsys):
    code, out, _ = run(capsys, "goldens")
    assert code == 0
    assert out.endswith("0 mismatches\n")


def test_verify_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        dest = tmp_path / f"r{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "twistkit", "verify", "reciprocity", "--seed", "3", "--levels", "2", "--output", str(dest)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]
