import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from weylm.cli import UsageError, build_config, main, parse_lambda, run_batch
from weylm.refdata import load_rows


@pytest.mark.parametrize("text,expected", [
    ("1+1i", ("1", "1")),
    ("i", ("0", "1")),
    ("-i", ("0", "-1")),
    ("1e-4i", ("0", "1e-4")),
    ("3-0.5i", ("3", "-0.5")),
    ("-2+10i", ("-2", "10")),
    ("1+1e-5i", ("1", "1e-5")),
    ("0.1 + 0.1i", ("0.1", "0.1")),
])
def test_parse_lambda(text, expected):
    assert parse_lambda(text) == expected


@pytest.mark.parametrize("text", ["1", "1+0i", "abc", "1+i+i", ""])
def test_parse_lambda_rejects(text):
    with pytest.raises(UsageError):
        parse_lambda(text)


@pytest.mark.parametrize("argv", [
    [],
    ["--alpha", "1"],
    ["--alpha", "1", "--lambda", "2"],
    ["--alpha", "x", "--lambda", "i"],
    ["--alpha", "1", "--lambda", "i", "--X", "-1"],
    ["--alpha", "1", "--lambda", "i", "--step", "0.3"],
    ["--alpha", "1", "--lambda", "i", "--step", "0.5@1", "--step", "0.25@0.5"],
    ["--alpha", "1", "--lambda", "i", "--bogus"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_table_defaults():
    cfg = build_config(["--table", "S5a"])
    assert cfg.alpha == F(1, 2) and cfg.bridge_eps == 0.000015625
    assert cfg.plan().counts == [319, 1999]
    assert len(cfg.references) == 1
    cfg = build_config(["--table", "T1", "--lambda", "i"])
    assert cfg.references is None and cfg.lambdas == [("0", "1")]


def test_nonsmooth_default_bridge_eps():
    cfg = build_config(["--alpha", "3/2", "--lambda", "1+1i"])
    assert cfg.bridge_eps == 0.000015625


def test_json_output(capsys):
    assert main(["--alpha", "1", "--lambda", "1+1i", "--lambda", "-1+1i", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [d["lambda"]["re"] for d in out] == ["1.0", "-1.0"]
    for d in out:
        assert d["status"] == "ENCLOSED"
        lo, hi = float(d["m"]["im"]["lo"]), float(d["m"]["im"]["hi"])
        assert 0 < lo <= hi
        assert d["diagnostics"]["steps"] == 320


def test_failed_exit_2(capsys):
    # one huge step from x = 10 cannot be enclosed
    assert main(["--alpha", "2", "--lambda", "i", "--step", "5"]) == 2
    assert "FAILED" in capsys.readouterr().out


def test_text_reports_reference(capsys):
    assert main(["--table", "T2"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 12
    assert all(line.endswith("reference: ok") for line in out)


def test_mismatch_is_not_failure():
    cfg = build_config(["--table", "T1"])
    cfg.lambdas = cfg.lambdas[:1]
    cfg.references = [load_rows("T2")[0]]  # deliberately wrong row
    rec = run_batch(cfg)[0]
    assert rec["ok"] and rec["match"] is False


def test_jobs_keep_order():
    cfg = build_config(["--alpha", "1", "--lambda", "i", "--lambda", "2+1i", "--lambda", "-1-1i", "--jobs", "2"])
    par = run_batch(cfg)
    cfg.jobs = 1
    seq = run_batch(cfg)
    assert [r["lambda"] for r in par] == [("0", "1"), ("2", "1"), ("-1", "-1")]
    for a, b in zip(par, seq):
        assert a["box"] == b["box"]


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "weylm", "--alpha", "1", "--lambda", "i"], capture_output=True, text=True)
    assert p.returncode == 0
    assert p.stdout.startswith("lambda = 0+1i: m in 0.55505")
