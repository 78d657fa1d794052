"""End-to-end tests of the ``qelab`` command line driver (subprocess level)."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from qelab.linalg import kron
from qelab.states import (
    DensityMatrix,
    MarkovSpec,
    MultipartiteState,
    markov_spec_to_json,
    markov_state,
    random_density,
    regularize,
    state_to_json,
)

CLI = [sys.executable, "-m", "qelab.cli"]


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env
    )


def _write_markov_spec(path, seed=0):
    rng = np.random.default_rng(seed)
    spec = MarkovSpec(
        d_a=2,
        d_c=2,
        weights=(0.6, 0.4),
        ab_factors=(
            regularize(random_density(4, rng), 1e-3),
            regularize(random_density(2, rng), 1e-3),
        ),
        bc_factors=(
            regularize(random_density(2, rng), 1e-3),
            regularize(random_density(4, rng), 1e-3),
        ),
    )
    path.write_text(json.dumps(markov_spec_to_json(spec)))
    return spec


def test_check_single_suite_passes():
    proc = run_cli("check", "--suite", "ssa", "--dims", "2,2,2",
                   "--trials", "10", "--seed", "7")
    assert proc.returncode == 0, proc.stderr
    records = json.loads(proc.stdout)
    assert len(records) == 10
    assert all(r["pass"] for r in records)
    assert "[ssa]" in proc.stderr and "PASS" in proc.stderr


def test_check_rejects_bad_config():
    assert run_cli("check", "--suite", "ssa", "--trials", "0").returncode == 2
    assert run_cli("check", "--suite", "nope").returncode == 2
    assert run_cli("check", "--suite", "ssa", "--dims", "2,x").returncode == 2


def test_check_two_runs_byte_identical():
    args = ("check", "--suite", "overlap-chain,ssa", "--trials", "4", "--seed", "3")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_check_seed_env_override():
    base = run_cli("check", "--suite", "ssa", "--trials", "3", "--seed", "8")
    overridden = run_cli(
        "check", "--suite", "ssa", "--trials", "3", "--seed", "0",
        env_extra={"QEL_SEED": "8"},
    )
    assert overridden.stdout == base.stdout
    bad = run_cli("check", "--suite", "ssa", "--trials", "1",
                  env_extra={"QEL_SEED": "not-an-int"})
    assert bad.returncode == 2


def test_check_csv_format(tmp_path):
    out = tmp_path / "rows.csv"
    proc = run_cli("check", "--suite", "golden-thompson", "--trials", "3",
                   "--format", "csv", "--out", str(out))
    assert proc.returncode == 0
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    assert header[:4] == ["checker", "dims", "seed", "trial"]
    assert header[-2:] == ["slack", "pass"]
    assert any(h.startswith("quantity:") for h in header)
    assert len(lines) == 4


def test_check_failure_dumps_worst_instance_and_replays(tmp_path):
    out = tmp_path / "rows.json"
    proc = run_cli(
        "check", "--suite", "sbw-limit", "--trials", "2", "--seed", "5",
        "--alpha", "0.5,0.25", "--out", str(out),
    )
    assert proc.returncode == 1
    dump = out.with_suffix(".json.worst.json")
    assert dump.exists()
    payload = json.loads(dump.read_text())
    assert payload["checker"] == "sbw-limit"
    failing = [r for r in json.loads(out.read_text()) if not r["pass"]]
    worst_slack = min(r["slack"] for r in failing)

    replay = run_cli("replay", str(dump))
    assert replay.returncode == 1
    (record,) = json.loads(replay.stdout)
    assert record["slack"] == worst_slack


def test_markov_command_reports_residuals(tmp_path):
    spec_path = tmp_path / "spec.json"
    _write_markov_spec(spec_path, seed=1)
    proc = run_cli("markov", str(spec_path))
    assert proc.returncode == 0, proc.stderr
    assert "markov_like" in proc.stdout
    values = {
        line.split("=")[0].strip(): line.split("=")[1].strip()
        for line in proc.stdout.splitlines() if "=" in line
    }
    assert float(values["cmi"]) < 1e-10
    for key in ("r_log", "r_petz", "r_recon_ab", "r_recon_bc"):
        assert float(values[key]) < 1e-7


def test_markov_command_single_product_block(tmp_path):
    rng = np.random.default_rng(2)
    spec = MarkovSpec(
        d_a=2,
        d_c=2,
        weights=(1.0,),
        ab_factors=(regularize(random_density(4, rng), 1e-3),),
        bc_factors=(regularize(random_density(4, rng), 1e-3),),
    )
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(markov_spec_to_json(spec)))
    proc = run_cli("markov", str(spec_path))
    assert proc.returncode == 0
    cmi_line = next(l for l in proc.stdout.splitlines() if l.strip().startswith("cmi"))
    assert float(cmi_line.split("=")[1]) < 1e-9


def test_markov_command_rejects_malformed_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("markov", str(bad)).returncode == 2
    assert run_cli("markov", str(tmp_path / "missing.json")).returncode == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"weights": [1.0]}))
    assert run_cli("markov", str(wrong)).returncode == 2


def _trotter_table(stderr):
    rows = {}
    for line in stderr.splitlines():
        line = line.strip()
        if line.startswith("n=") and "t_n=" in line:
            n = int(line.split("t_n=")[0].split("=")[1])
            rows[n] = float(line.split("t_n=")[1].split()[0])
    return rows


def test_trotter_command_product_state(tmp_path):
    rng = np.random.default_rng(3)
    mats = [regularize(random_density(2, rng), 1e-4).mat for _ in range(3)]
    full = kron(kron(mats[0], mats[1]), mats[2])
    state = MultipartiteState(DensityMatrix(full), (2, 2, 2))
    path = tmp_path / "product.json"
    path.write_text(json.dumps(state_to_json(state)))
    proc = run_cli("trotter", str(path), "--nmax", "8")
    assert proc.returncode == 0, proc.stderr
    table = _trotter_table(proc.stderr)
    assert set(table) == {1, 2, 4, 8}
    assert all(abs(t - 1.0) < 1e-9 for t in table.values())


def test_trotter_command_markov_state(tmp_path):
    rng = np.random.default_rng(4)
    spec = MarkovSpec(
        d_a=2,
        d_c=2,
        weights=(0.5, 0.5),
        ab_factors=(
            regularize(random_density(4, rng), 1e-3),
            regularize(random_density(2, rng), 1e-3),
        ),
        bc_factors=(
            regularize(random_density(2, rng), 1e-3),
            regularize(random_density(4, rng), 1e-3),
        ),
    )
    state = markov_state(spec)
    path = tmp_path / "markov.json"
    path.write_text(json.dumps(state_to_json(state)))
    proc = run_cli("trotter", str(path), "--nmax", "4")
    assert proc.returncode == 0
    for t in _trotter_table(proc.stderr).values():
        assert abs(t - 1.0) < 1e-8


def test_trotter_command_random_trials():
    proc = run_cli("trotter", "--trials", "2", "--seed", "6", "--nmax", "16")
    assert proc.returncode == 0, proc.stderr
    assert "t_n=" in proc.stderr


def test_explore_report_and_exit_codes(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("explore", "cmi-petz", "--trials", "30", "--seed", "9",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    report = json.loads(out.read_text())
    for key in ("kind", "trials", "min_slack", "histogram", "worst_instance"):
        assert key in report, key
    assert report["trials"] == 30
    assert sum(report["histogram"]["counts"]) == 30
    assert len(report["histogram"]["edges"]) == len(report["histogram"]["counts"]) + 1
    assert not report["candidate_counterexample"]

    assert run_cli("explore", "bogus-kind", "--trials", "2").returncode == 2

    replay = run_cli("replay", str(out))
    assert replay.returncode == 0
    assert "slack" in replay.stdout


def test_explore_is_deterministic():
    a = run_cli("explore", "trotter-monotone", "--trials", "10", "--seed", "2")
    b = run_cli("explore", "trotter-monotone", "--trials", "10", "--seed", "2")
    assert a.stdout == b.stdout
    assert a.returncode == b.returncode == 0


def test_replay_rejects_malformed_dump(tmp_path):
    bad = tmp_path / "dump.json"
    bad.write_text("[1, 2")
    assert run_cli("replay", str(bad)).returncode == 2
