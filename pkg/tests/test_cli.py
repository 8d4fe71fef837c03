"""Command line behavior: formats, determinism, exit codes."""

import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

import cyclelab.cli as cli
from cyclelab.errors import NumericalDegeneracy

from oracles import LOG2

CSV_HEADER = "re,im,value,argmax_slice,n_pos"


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.update(env_extra or {})
    proc = subprocess.run([sys.executable, "-m", "cyclelab.cli", *args],
                          capture_output=True, text=True, env=env)
    return proc


def test_eval_csv_example(tmp_path):
    out = tmp_path / "g.csv"
    proc = run_cli("eval", "--scenario", "su11", "--target", "r_md",
                   "--grid", "-0.9:0.9:41", "--out", str(out))
    assert proc.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 41 * 41
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    center = min(rows, key=lambda r: abs(float(r["re"])) + abs(float(r["im"])))
    assert abs(float(center["value"]) - LOG2) < 1e-6
    empty = [r for r in rows if r["value"] == ""]
    assert empty, "square grid corners leave the disk"
    assert all(r["n_pos"] == "-1" and r["argmax_slice"] == "" for r in empty)


def test_eval_is_byte_identical(tmp_path):
    args = ("eval", "--scenario", "su21", "--target", "r_d",
            "--grid", "-0.5:0.5:3", "--seed", "7")
    a, b = run_cli(*args), run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.splitlines()[0] == CSV_HEADER


def test_eval_thread_cap_invariance():
    args = ("eval", "--scenario", "su21", "--target", "r_md",
            "--grid", "-0.6:0.6:3")
    a = run_cli(*args, env_extra={"CYCLELAB_THREADS": "1"})
    b = run_cli(*args, env_extra={"CYCLELAB_THREADS": "3"})
    assert a.stdout == b.stdout


def test_eval_json_payload():
    proc = run_cli("eval", "--scenario", "su11", "--target", "r_md",
                   "--grid", "-1.1:1.1:3", "--format", "json")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["format"] == "cyclelab-grid-1"
    assert payload["scenario"] == "su11"
    assert len(payload["rows"]) == 9
    bad = [r for r in payload["rows"] if r["error"]]
    assert bad and all(r["value"] is None for r in bad)
    assert {r["error"] for r in bad} == {"outside the domain"}
    good = [r for r in payload["rows"] if not r["error"]]
    assert all(isinstance(r["value"], float) for r in good)


def test_verify_repeatable_and_scenario_scoped(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ("verify", "--suite", "incidence", "--seed", "42")
    p1 = run_cli(*args, "--out", str(f1))
    p2 = run_cli(*args, "--out", str(f2))
    assert p1.returncode == p2.returncode == 0
    assert f1.read_bytes() == f2.read_bytes()
    assert "overall: PASS" in p1.stderr
    scoped = run_cli("verify", "--suite", "exhaustion", "--scenario", "su11")
    payload = json.loads(scoped.stdout)
    assert payload["scenarios"] == ["su11"]
    assert payload["passed"] is True


def test_certify_stream_and_format_guard(tmp_path):
    proc = run_cli("certify", "--scenario", "su11", "--count", "2",
                   "--seed", "5")
    assert proc.returncode == 0
    records = [json.loads(line) for line in proc.stdout.splitlines()]
    assert len(records) == 2
    for rec in records:
        assert rec["q_convex_ok"] is True
        assert rec["n_pos"] >= rec["required_pos"]
        assert rec["touch_gap"] <= 1e-10
    guard = run_cli("certify", "--scenario", "su11", "--format", "csv")
    assert guard.returncode == 2


def test_info_reports_invariants():
    proc = run_cli("info", "--scenario", "su21")
    assert proc.returncode == 0
    assert "q (cycle dimension): 1" in proc.stdout
    assert "n_Z (ambient dimension): 2" in proc.stdout
    assert "m (base cycle intersections with the cell closure): 1" in proc.stdout
    disk = run_cli("info", "--scenario", "su11")
    assert "q (cycle dimension): 0" in disk.stdout
    assert "n_Z (ambient dimension): 1" in disk.stdout


def test_usage_errors_exit_2(tmp_path):
    assert run_cli("eval", "--scenario", "nope").returncode == 2
    assert run_cli("eval", "--scenario", "su11", "--target", "r_md",
                   "--grid", "bad").returncode == 2
    assert run_cli("eval", "--target", "r_md").returncode == 2  # no scenario
    cfg = tmp_path / "c.json"
    cfg.write_text('{"unknown_key": 1}')
    assert run_cli("eval", "--config", str(cfg)).returncode == 2
    assert run_cli().returncode == 2  # no command


def test_config_file_merge_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": "su11", "target": "r_md",
                               "grid": "-0.3:0.3:3", "seed": 7}))
    base = run_cli("eval", "--config", str(cfg))
    assert base.returncode == 0
    assert len(base.stdout.splitlines()) == 1 + 9
    over = run_cli("eval", "--config", str(cfg), "--grid", "-0.3:0.3:2")
    assert len(over.stdout.splitlines()) == 1 + 4


def test_parse_grid_accepts_and_rejects():
    assert cli.parse_grid("-0.9:0.9:41") == (-0.9, 0.9, 41)
    from cyclelab import InvalidInput

    for bad in ("1:2", "a:b:3", "0.5:-0.5:3", "0:1:0"):
        with pytest.raises(InvalidInput):
            cli.parse_grid(bad)


def test_runtime_failure_exits_1(monkeypatch, capsys):
    def boom(*a, **k):
        raise NumericalDegeneracy("synthetic failure")

    monkeypatch.setattr(cli, "evaluate_grid", boom)
    rc = cli.main(["eval", "--scenario", "su11", "--target", "r_md",
                   "--grid", "-0.1:0.1:2"])
    assert rc == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "NumericalDegeneracy"


def test_failed_verification_exits_1(monkeypatch, capsys):
    class FakeReport:
        passed = False

        def summary_lines(self):
            return ["overall: FAIL"]

        def to_json(self):
            return "{}\n"

    monkeypatch.setattr(cli, "run_verification",
                        lambda **kw: FakeReport())
    rc = cli.main(["verify"])
    assert rc == 1
