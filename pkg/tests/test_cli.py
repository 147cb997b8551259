import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from miptkit.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _config(tmp_path, **overrides):
    cfg = {
        "grid": {
            "eta_values": [0.0],
            "p_values": [0.2],
            "n_values": [8],
            "beta": 1.0,
            "n_trajectories": 2,
            "exclusions": [],
        },
        "engine": "tableau",
        "truncation": {"rel_threshold": 1e-6, "max_bond": 256},
        "magic_samples": 128,
        "master_seed": 321,
        "workers": 1,
        "output_dir": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_run_minimal_config_row_count(tmp_path, runner):
    cfg = _config(tmp_path)
    res = runner.invoke(main, ["run", "--config", str(cfg)])
    assert res.exit_code == 0, res.output
    raw = (tmp_path / "out" / "raw.csv").read_text().strip().splitlines()
    # header + 2 trajectories x (4N/8 = 4) observation rows
    assert len(raw) == 1 + 2 * 4
    assert raw[0] == "eta,p,beta,N,traj,seed,t,entanglement,magic,magic_err"


def test_run_rerun_byte_identical(tmp_path, runner):
    cfg = _config(tmp_path)
    assert runner.invoke(main, ["run", "--config", str(cfg)]).exit_code == 0
    first = (tmp_path / "out" / "raw.csv").read_bytes()
    assert runner.invoke(main, ["run", "--config", str(cfg)]).exit_code == 0
    assert (tmp_path / "out" / "raw.csv").read_bytes() == first
    # and with --force plus a different worker count
    res = runner.invoke(main, ["run", "--config", str(cfg), "--force", "--workers", "2"])
    assert res.exit_code == 0
    assert (tmp_path / "out" / "raw.csv").read_bytes() == first


def test_run_invalid_field_exit_2(tmp_path, runner):
    cfg = _config(tmp_path, grid={
        "eta_values": [0.0], "p_values": [1.5], "n_values": [8],
        "beta": 1.0, "n_trajectories": 2, "exclusions": [],
    })
    res = runner.invoke(main, ["run", "--config", str(cfg)])
    assert res.exit_code == 2
    assert "p" in res.output


def test_stats_recomputes_aggregate(tmp_path, runner):
    cfg = _config(tmp_path)
    assert runner.invoke(main, ["run", "--config", str(cfg)]).exit_code == 0
    agg = (tmp_path / "out" / "aggregate.csv").read_bytes()
    res = runner.invoke(main, [
        "stats", "--in", str(tmp_path / "out" / "raw.csv"),
        "--out", str(tmp_path / "re"),
    ])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "re" / "aggregate.csv").read_bytes() == agg


def _write_synthetic_aggregate(path, pstar=0.17):
    ns = np.array([8, 12, 16, 24, 32, 48, 64], dtype=float)
    rng = np.random.default_rng(5)
    rows = ["eta,p,beta,N,quantity,mean,raw_std,rescaled_std,P,n_traj"]
    for p in np.round(np.arange(0.10, 0.2401, 0.02), 10):
        if p <= pstar:
            y = 1 + 2.0 * (pstar - p) / 0.07 * ns**0.4
        else:
            y = 1 - 24.0 * (p - pstar) / 0.07 * ns**-0.4
        y = y + rng.normal(0, 0.005, len(ns))
        for n, v in zip(ns, y):
            rows.append(f"2.0,{float(p)!r},1.0,{int(n)},magic,{float(v)!r},0.01,0.005,{int(n) // 4},256")
    path.write_text("\n".join(rows) + "\n")


def test_fit_command_outputs(tmp_path, runner):
    agg = tmp_path / "aggregate.csv"
    _write_synthetic_aggregate(agg)
    res = runner.invoke(main, [
        "fit", "--in", str(agg), "--quantity", "magic", "--eta", "2.0",
        "--out", str(tmp_path / "rep"),
    ])
    assert res.exit_code == 0, res.output
    assert "p_c(magic, eta=2.0)" in res.output
    fits = json.loads((tmp_path / "rep" / "fit_report.json").read_text())
    assert {f["law"] for f in fits} == {"extensive", "area", "log"}
    assert all(f["quantity"] == "magic" and f["eta"] == 2.0 for f in fits)
    crit = json.loads((tmp_path / "rep" / "critical_report.json").read_text())
    assert len(crit) == 1
    assert abs(crit[0]["p_c"] - 0.17) < 0.01


def test_fit_insufficient_data_exit_2(tmp_path, runner):
    agg = tmp_path / "aggregate.csv"
    agg.write_text(
        "eta,p,beta,N,quantity,mean,raw_std,rescaled_std,P,n_traj\n"
        "2.0,0.1,1.0,8,magic,1.0,0.1,0.05,2,16\n"
        "2.0,0.1,1.0,12,magic,1.0,0.1,0.05,3,16\n"
    )
    res = runner.invoke(main, ["fit", "--in", str(agg), "--quantity", "magic",
                               "--eta", "2.0", "--out", str(tmp_path)])
    assert res.exit_code == 2
    assert "0.1" in res.output


def test_critical_command(tmp_path, runner):
    agg = tmp_path / "aggregate.csv"
    _write_synthetic_aggregate(agg)
    res = runner.invoke(main, ["critical", "--in", str(agg), "--out", str(tmp_path / "r")])
    assert res.exit_code == 0, res.output
    crit = json.loads((tmp_path / "r" / "critical_report.json").read_text())
    assert [c["quantity"] for c in crit] == ["magic"]


def test_separable_command(tmp_path, runner):
    res = runner.invoke(main, [
        "separable", "--eta", "1.0", "--beta", "1.0", "--p", "0.5",
        "--n", "8", "--trajectories", "24", "--seed", "7",
    ])
    assert res.exit_code == 0, res.output
    assert "prediction" in res.output


def test_verify_fast(runner):
    res = runner.invoke(main, ["verify", "--level", "fast"])
    assert res.exit_code == 0, res.output
    assert "all 5 checks passed" in res.output


def test_workers_env_fallback(tmp_path, runner, monkeypatch):
    monkeypatch.setenv("MIPT_WORKERS", "not-a-number")
    cfg = _config(tmp_path)
    res = runner.invoke(main, ["run", "--config", str(cfg)])
    assert res.exit_code == 2
    assert "MIPT_WORKERS" in res.output


def test_fit_handles_zero_sigma_rows(tmp_path, runner):
    # integer-valued tableau entanglement can tie window averages exactly;
    # the pipeline floors the fit error at the quantization unit
    agg = tmp_path / "aggregate.csv"
    _write_synthetic_aggregate(agg)
    lines = agg.read_text().splitlines()
    parts = lines[1].split(",")
    parts[7] = "0.0"
    lines[1] = ",".join(parts)
    agg.write_text("\n".join(lines) + "\n")
    res = runner.invoke(main, ["fit", "--in", str(agg), "--quantity", "magic",
                               "--eta", "2.0", "--out", str(tmp_path / "rep")])
    assert res.exit_code == 0, res.output
