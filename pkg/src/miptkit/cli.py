"""Command-line interface: sweeps, statistics, fits, and verification.

Commands: run, stats, fit, critical, separable, verify.  Exit codes:
0 success, 1 runtime failure, 2 invalid input.  Worker count resolves as
flag > MIPT_WORKERS environment variable > config file > 1.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict
from pathlib import Path

import click

from . import analysis, ensemble
from .circuit import CircuitParams, ENGINES
from .verify import run_checks

DEFAULT_SEED = 20230915


def _common(f):
    f = click.option("--seed", type=int, default=None, help="Master seed override.")(f)
    f = click.option("--workers", type=int, default=None, help="Worker processes.")(f)
    f = click.option("--out", "out_dir", type=click.Path(), default=None,
                     help="Output directory.")(f)
    f = click.option("--force", is_flag=True, help="Recompute existing outputs.")(f)
    return f


def _resolve_workers(flag, config_value=None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("MIPT_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise click.UsageError(f"MIPT_WORKERS: not an integer ({env})") from exc
    if config_value is not None:
        return max(1, int(config_value))
    return 1


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise click.UsageError(f"config: file not found ({path})") from exc
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config: invalid JSON ({exc})") from exc


def _validate_run_config(cfg: dict):
    errors = []

    def need(dct, field, types, path_):
        val = dct.get(field)
        if val is None:
            errors.append(f"{path_}: missing")
            return None
        if not isinstance(val, types):
            errors.append(f"{path_}: wrong type ({type(val).__name__})")
            return None
        return val

    grid_cfg = need(cfg, "grid", dict, "grid") or {}
    etas = need(grid_cfg, "eta_values", list, "grid.eta_values") or []
    ps = need(grid_cfg, "p_values", list, "grid.p_values") or []
    ns = need(grid_cfg, "n_values", list, "grid.n_values") or []
    beta = grid_cfg.get("beta", 1.0)
    for i, p in enumerate(ps):
        if not isinstance(p, (int, float)) or not 0 <= p <= 1:
            errors.append(f"grid.p_values[{i}]: p must be in [0, 1]")
    for i, n in enumerate(ns):
        if not isinstance(n, int) or n < 2 or n % 2:
            errors.append(f"grid.n_values[{i}]: N must be even and >= 2")
    for i, e in enumerate(etas):
        if not isinstance(e, (int, float)) or e < 0:
            errors.append(f"grid.eta_values[{i}]: eta must be >= 0")
    n_traj = grid_cfg.get("n_trajectories", 512)
    if not isinstance(n_traj, int) or n_traj < 1:
        errors.append("grid.n_trajectories: must be a positive integer")
    exclusions = grid_cfg.get("exclusions", [])
    engine = cfg.get("engine", "mps")
    if engine not in ENGINES:
        errors.append(f"engine: must be one of {ENGINES}")
    trunc = cfg.get("truncation", {})
    rel = trunc.get("rel_threshold", 1e-6)
    bond = trunc.get("max_bond", 256)
    if not isinstance(rel, (int, float)) or rel < 0:
        errors.append("truncation.rel_threshold: must be >= 0")
    if not isinstance(bond, int) or bond < 1:
        errors.append("truncation.max_bond: must be a positive integer")
    magic_samples = cfg.get("magic_samples", 128)
    if not isinstance(magic_samples, int) or magic_samples < 2:
        errors.append("magic_samples: must be an integer >= 2")
    master_seed = cfg.get("master_seed", DEFAULT_SEED)
    if not isinstance(master_seed, int):
        errors.append("master_seed: must be an integer")
    if errors:
        raise click.UsageError("invalid config:\n  " + "\n  ".join(errors))
    try:
        grid = ensemble.SweepGrid(
            eta_values=tuple(etas), p_values=tuple(ps), n_values=tuple(ns),
            beta=float(beta), n_trajectories=n_traj,
            exclusions=tuple((float(p), int(n)) for p, n in exclusions),
        )
    except ValueError as exc:
        raise click.UsageError(f"invalid config: grid: {exc}") from exc
    return {
        "grid": grid,
        "engine": engine,
        "rel_threshold": float(rel),
        "max_bond": bond,
        "magic_samples": magic_samples,
        "master_seed": master_seed,
        "workers": cfg.get("workers"),
        "output_dir": cfg.get("output_dir", "out"),
    }


@click.group()
def main():
    """Monitored Clifford+T circuits: sweeps, steady-state stats, fits."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True,
              help="JSON sweep configuration.")
@_common
def run(config_path, seed, workers, out_dir, force):
    """Run (or resume) a trajectory sweep and write raw/aggregate CSVs."""
    cfg = _validate_run_config(_load_config(config_path))
    master_seed = seed if seed is not None else cfg["master_seed"]
    out = Path(out_dir or cfg["output_dir"])
    result = ensemble.run_sweep(
        cfg["grid"], master_seed, cfg["engine"], out,
        workers=_resolve_workers(workers, cfg["workers"]),
        rel_threshold=cfg["rel_threshold"], max_bond=cfg["max_bond"],
        magic_samples=cfg["magic_samples"], force=force,
        log=lambda msg: click.echo(msg, err=True),
    )
    click.echo(f"raw:       {result.raw_path}")
    click.echo(f"aggregate: {result.aggregate_path}")
    click.echo(f"{'eta':>6} {'p':>6} {'N':>5} {'quantity':>13} {'mean':>9} {'raw':>8} {'rescaled':>9}")
    for st in result.stats:
        eta, p, beta, n = st.key
        click.echo(f"{eta:6.2f} {p:6.3f} {n:5d} {'entanglement':>13}"
                   f" {st.mean_entanglement:9.4f} {st.raw_std_entanglement:8.4f}"
                   f" {st.rescaled_std_entanglement:9.4f}")
        if st.mean_magic is not None:
            click.echo(f"{eta:6.2f} {p:6.3f} {n:5d} {'magic':>13}"
                       f" {st.mean_magic:9.4f} {st.raw_std_magic:8.4f}"
                       f" {st.rescaled_std_magic:9.4f}")
    if result.failures:
        raise click.ClickException(
            "failed grid points:\n  "
            + "\n  ".join(f"{k}: {v}" for k, v in result.failures.items())
        )


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True), required=True,
              help="Raw trajectory CSV.")
@_common
def stats(in_path, seed, workers, out_dir, force):
    """Recompute aggregate statistics from a raw CSV."""
    import csv as _csv

    out = Path(out_dir or ".") / "aggregate.csv"
    if out.exists() and not force:
        click.echo(f"{out} exists; skipping (use --force to rewrite)")
        return
    stats_list = ensemble.aggregate_from_raw(in_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(ensemble.AGG_HEADER)
        for st in stats_list:
            writer.writerows(ensemble.stats_rows(st))
    click.echo(f"aggregate: {out}")


def _fit_cell(rows, quantity, eta):
    """Fit all three laws per p for one (quantity, eta) cell of an aggregate."""
    sel = [r for r in rows if r["quantity"] == quantity and r["eta"] == eta]
    by_p: dict = {}
    for r in sel:
        sigma = max(r["rescaled_std"], analysis.error_floor(r["n_traj"], r["P"]))
        by_p.setdefault(r["p"], []).append((r["N"], r["mean"], sigma))
    missing = [p for p, pts in sorted(by_p.items()) if len(pts) < 4]
    if not by_p or missing:
        raise click.UsageError(
            f"insufficient data for quantity={quantity} eta={eta}: "
            + (f"fewer than 4 N values at p={missing}" if missing else "no rows")
        )
    fit_rows = []
    series = []
    restricted_series = []
    for p, pts in sorted(by_p.items()):
        fits = {}
        for law in analysis.LAWS:
            fr = analysis.fit_scaling(pts, law)
            fits[law] = fr
            fit_rows.append({"quantity": quantity, "eta": eta, "p": p, "law": law,
                             "restricted": False, **asdict(fr)})
        series.append((p, analysis.f_ratio(fits["extensive"], fits["area"])))
        # the same fits with the largest system size dropped (feeds sigma_B
        # and the faint companion curve of the F-test figure)
        nmax = max(n for n, _, _ in pts)
        rpts = [pt for pt in pts if pt[0] != nmax]
        if len(rpts) >= 4:
            rext = analysis.fit_scaling(rpts, "extensive")
            rarea = analysis.fit_scaling(rpts, "area")
            for fr in (rext, rarea):
                fit_rows.append({"quantity": quantity, "eta": eta, "p": p,
                                 "law": fr.law, "restricted": True, **asdict(fr)})
            restricted_series.append((p, analysis.f_ratio(rext, rarea)))
    return fit_rows, series, restricted_series


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True), required=True,
              help="Aggregate CSV.")
@click.option("--quantity", type=click.Choice(["entanglement", "magic"]), required=True)
@click.option("--eta", type=float, required=True)
@_common
def fit(in_path, quantity, eta, seed, workers, out_dir, force):
    """Scaling fits, ln F series, and the critical point for one cell."""
    rows = ensemble.read_aggregate_csv(in_path)
    fit_rows, series, restricted = _fit_cell(rows, quantity, eta)
    try:
        cp = analysis.critical_rate(series, restricted, quantity=quantity, eta=eta)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    fit_path = out / "fit_report.json"
    crit_path = out / "critical_report.json"
    if (fit_path.exists() or crit_path.exists()) and not force:
        raise click.ClickException(f"{fit_path} exists; use --force to overwrite")
    fit_path.write_text(json.dumps(fit_rows, indent=1, sort_keys=True) + "\n")
    crit_path.write_text(json.dumps([asdict(cp)], indent=1, sort_keys=True) + "\n")
    for p, lnf in series:
        click.echo(f"p={p:.3f}  ln F = {lnf:+.3f}")
    click.echo(f"p_c({quantity}, eta={eta}) = {cp.p_c:.4f} +- {cp.sigma:.4f} "
               f"(sigma_A={cp.sigma_a:.4f}, sigma_B={cp.sigma_b:.4f})")
    for w in cp.warnings:
        click.echo(f"warning: {w}", err=True)


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True), required=True,
              help="Aggregate CSV.")
@_common
def critical(in_path, seed, workers, out_dir, force):
    """Critical points for every (quantity, eta) cell in an aggregate."""
    rows = ensemble.read_aggregate_csv(in_path)
    cells = sorted({(r["quantity"], r["eta"]) for r in rows})
    all_fits = []
    crit_rows = []
    for quantity, eta in cells:
        try:
            fit_rows, series, restricted = _fit_cell(rows, quantity, eta)
            cp = analysis.critical_rate(series, restricted, quantity=quantity, eta=eta)
        except (click.UsageError, ValueError) as exc:
            click.echo(f"skipping {quantity} eta={eta}: {exc}", err=True)
            continue
        all_fits.extend(fit_rows)
        crit_rows.append(asdict(cp))
        click.echo(f"p_c({quantity}, eta={eta}) = {cp.p_c:.4f} +- {cp.sigma:.4f}")
    if not crit_rows:
        raise click.ClickException("no cell produced a critical point")
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "fit_report.json").write_text(json.dumps(all_fits, indent=1, sort_keys=True) + "\n")
    (out / "critical_report.json").write_text(
        json.dumps(crit_rows, indent=1, sort_keys=True) + "\n"
    )
    click.echo(f"reports in {out}")


@main.command()
@click.option("--eta", type=float, default=1.0)
@click.option("--beta", type=float, default=1.0)
@click.option("--p", "p_values", type=float, multiple=True, default=(0.3, 0.5, 0.7))
@click.option("--n", "n_values", type=int, multiple=True, default=(32,))
@click.option("--trajectories", type=int, default=256)
@_common
def separable(eta, beta, p_values, n_values, trajectories, seed, workers, out_dir, force):
    """Compare the analytic separable-model steady state to Monte Carlo."""
    master_seed = seed if seed is not None else DEFAULT_SEED
    nworkers = _resolve_workers(workers)
    click.echo(f"{'p':>6} {'N':>5} {'prediction':>11} {'simulated':>20} {'pull':>7}")
    worst = 0.0
    for p in p_values:
        for n in n_values:
            pred = analysis.separable_prediction(eta, p, beta, n)
            params = CircuitParams(n_qubits=n, p=p, eta=eta, beta=beta,
                                   engine="mps", brickwork=False)
            records = ensemble.simulate_point(params, master_seed, trajectories, nworkers)
            st = ensemble.steady_state_stats(records)
            err = st.rescaled_std_magic or float("nan")
            pull = (st.mean_magic - pred) / err if err else float("nan")
            worst = max(worst, abs(pull))
            click.echo(f"{p:6.3f} {n:5d} {pred:11.5f} "
                       f"{st.mean_magic:11.5f} +- {err:7.5f} {pull:+7.2f}")
    click.echo(f"max |pull| = {worst:.2f} sigma over {trajectories} trajectories")


@main.command()
@click.option("--level", type=click.Choice(["fast", "full"]), default="fast")
@_common
def verify(level, seed, workers, out_dir, force):
    """Run the cross-engine oracle suites; nonzero exit on any failure."""
    results = run_checks(level)
    failed = False
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"[{status}] {r.name}: {r.detail}")
        failed = failed or not r.passed
    if failed:
        raise click.ClickException("verification failed")
    click.echo(f"all {len(results)} checks passed ({level})")


if __name__ == "__main__":
    main()
