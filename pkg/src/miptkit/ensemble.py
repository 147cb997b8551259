"""Trajectory ensembles over parameter grids with steady-state statistics.

A sweep covers the product of (eta, p, N) values at fixed beta, minus an
exclusion list, with `n_trajectories` per point.  Every trajectory seed is
derived from the master seed and the point's parameter values (not from the
enumeration order), so any record is reproducible from (grid, master_seed,
trajectory index) and worker count never affects results.

Steady-state statistics follow the fixed window t in (2N, 4N]: observables
are first averaged over trajectories at each recorded time, the window
values are then averaged, their sample standard deviation is the raw error,
and dividing by sqrt(P) (P = number of window values = N/4 at the default
cadence) gives the rescaled error used by the scaling fits.

Persisted interface (consumed by the analysis CLI and the figures frontend):
  raw CSV        eta,p,beta,N,traj,seed,t,entanglement,magic,magic_err
  aggregate CSV  eta,p,beta,N,quantity,mean,raw_std,rescaled_std,P,n_traj
  manifest JSON  master seed, engine, grid echo, completed point counts
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .circuit import CircuitParams, TrajectoryRecord, run_trajectory

RAW_HEADER = ("eta", "p", "beta", "N", "traj", "seed", "t", "entanglement", "magic", "magic_err")
AGG_HEADER = ("eta", "p", "beta", "N", "quantity", "mean", "raw_std", "rescaled_std", "P", "n_traj")


@dataclass(frozen=True)
class SweepGrid:
    """Parameter grid of a sweep; exclusions are (p, N) pairs."""

    eta_values: tuple
    p_values: tuple
    n_values: tuple
    beta: float
    n_trajectories: int = 512
    exclusions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "eta_values", tuple(float(v) for v in self.eta_values))
        object.__setattr__(self, "p_values", tuple(float(v) for v in self.p_values))
        object.__setattr__(self, "n_values", tuple(int(v) for v in self.n_values))
        object.__setattr__(
            self, "exclusions", tuple((float(p), int(n)) for p, n in self.exclusions)
        )
        if not (self.eta_values and self.p_values and self.n_values):
            raise ValueError("grid axes must be non-empty")
        if self.n_trajectories < 1:
            raise ValueError("n_trajectories must be >= 1")
        pn = {(p, n) for p in self.p_values for n in self.n_values}
        for exc in self.exclusions:
            if exc not in pn:
                raise ValueError(f"exclusion {exc} not in the p x N product")

    def points(self):
        """Non-excluded grid points in canonical (eta, p, N) order."""
        out = []
        for eta in self.eta_values:
            for p in self.p_values:
                for n in self.n_values:
                    if (p, n) not in self.exclusions:
                        out.append((eta, p, self.beta, n))
        return out


def point_key(eta: float, p: float, beta: float, n: int) -> str:
    return f"eta={eta!r}_p={p!r}_beta={beta!r}_N={n}"


def _f64_bits(x: float) -> int:
    return int(np.float64(x).view(np.uint64))


def trajectory_seed(master_seed: int, eta: float, p: float, beta: float, n: int, traj: int) -> int:
    """Derived seed; depends on the point's values, never on grid layout."""
    ss = np.random.SeedSequence(
        entropy=master_seed,
        spawn_key=(_f64_bits(eta), _f64_bits(p), _f64_bits(beta), n, traj),
    )
    return int(ss.generate_state(1, np.uint64)[0])


def _traj_task(args):
    params, seed = args
    return run_trajectory(params, seed)


def simulate_point(
    params: CircuitParams,
    master_seed: int,
    n_trajectories: int,
    workers: int = 1,
) -> list:
    """All trajectories of one grid point, ordered by trajectory index."""
    seeds = [
        trajectory_seed(master_seed, params.eta, params.p, params.beta, params.n_qubits, i)
        for i in range(n_trajectories)
    ]
    tasks = [(params, s) for s in seeds]
    if workers <= 1 or n_trajectories == 1:
        return [_traj_task(t) for t in tasks]
    chunk = max(1, n_trajectories // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_traj_task, tasks, chunksize=chunk))


@dataclass(frozen=True)
class EnsembleStats:
    """Windowed steady-state statistics of one grid point."""

    key: tuple  # (eta, p, beta, N)
    mean_entanglement: float
    raw_std_entanglement: float
    rescaled_std_entanglement: float
    mean_magic: float | None
    raw_std_magic: float | None
    rescaled_std_magic: float | None
    window_count: int
    n_trajectories: int


def steady_state_stats(records: list) -> EnsembleStats:
    """Average trajectory-mean observables over the (2N, 4N] window."""
    if not records:
        raise ValueError("no records")
    params = records[0].params
    key = (params.eta, params.p, params.beta, params.n_qubits)
    for r in records:
        rp = r.params
        if (rp.eta, rp.p, rp.beta, rp.n_qubits) != key:
            raise ValueError("records do not share a grid point")
    n = params.n_qubits
    if params.total_steps < 4 * n:
        raise ValueError("window (2N, 4N] needs total_steps >= 4N")
    times = [s.t for s in records[0].samples if 2 * n < s.t <= 4 * n]
    if len(times) < 2:
        raise ValueError("fewer than 2 steady-state window samples")
    by_time = {t: i for i, t in enumerate(times)}
    ent = np.zeros((len(records), len(times)))
    has_magic = records[0].samples[0].magic is not None
    mag = np.zeros_like(ent) if has_magic else None
    for i, r in enumerate(records):
        for s in r.samples:
            j = by_time.get(s.t)
            if j is None:
                continue
            ent[i, j] = s.entanglement
            if has_magic:
                mag[i, j] = s.magic
    p_cnt = len(times)

    def window_stats(block):
        series = block.mean(axis=0)
        raw = float(series.std(ddof=1))
        return float(series.mean()), raw, raw / math.sqrt(p_cnt)

    e_mean, e_raw, e_resc = window_stats(ent)
    if has_magic:
        m_mean, m_raw, m_resc = window_stats(mag)
    else:
        m_mean = m_raw = m_resc = None
    return EnsembleStats(
        key=key,
        mean_entanglement=e_mean,
        raw_std_entanglement=e_raw,
        rescaled_std_entanglement=e_resc,
        mean_magic=m_mean,
        raw_std_magic=m_raw,
        rescaled_std_magic=m_resc,
        window_count=p_cnt,
        n_trajectories=len(records),
    )


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def raw_rows(records: list):
    """CSV rows (lists of strings) for a point's records, canonical order."""
    rows = []
    for traj, r in enumerate(records):
        p = r.params
        for s in r.samples:
            rows.append(
                [
                    _fmt(p.eta), _fmt(p.p), _fmt(p.beta), str(p.n_qubits),
                    str(traj), str(r.seed), str(s.t),
                    _fmt(s.entanglement), _fmt(s.magic), _fmt(s.magic_err),
                ]
            )
    return rows


def stats_rows(stats: EnsembleStats):
    eta, p, beta, n = stats.key
    base = [_fmt(eta), _fmt(p), _fmt(beta), str(n)]
    rows = [
        base
        + [
            "entanglement",
            _fmt(stats.mean_entanglement),
            _fmt(stats.raw_std_entanglement),
            _fmt(stats.rescaled_std_entanglement),
            str(stats.window_count),
            str(stats.n_trajectories),
        ]
    ]
    if stats.mean_magic is not None:
        rows.append(
            base
            + [
                "magic",
                _fmt(stats.mean_magic),
                _fmt(stats.raw_std_magic),
                _fmt(stats.rescaled_std_magic),
                str(stats.window_count),
                str(stats.n_trajectories),
            ]
        )
    return rows


@dataclass
class SweepResult:
    raw_path: Path
    aggregate_path: Path
    manifest_path: Path
    stats: list
    failures: dict


def run_sweep(
    grid: SweepGrid,
    master_seed: int,
    engine: str,
    out_dir,
    workers: int = 1,
    rel_threshold: float = 1e-6,
    max_bond: int = 256,
    magic_samples: int = 128,
    total_steps_factor: int = 4,
    force: bool = False,
    log=None,
) -> SweepResult:
    """Run (or resume) a sweep, persisting per-point parts and the manifest.

    Interrupted sweeps resume from the manifest without recomputing finished
    points; per-point write failures are collected, not fatal.
    """
    out = Path(out_dir)
    parts = out / "parts"
    parts.mkdir(parents=True, exist_ok=True)
    manifest_path = out / "manifest.json"
    manifest = {"master_seed": master_seed, "engine": engine,
                "grid": asdict(grid), "completed": {}}
    if manifest_path.exists() and not force:
        old = json.loads(manifest_path.read_text())
        if old.get("master_seed") == master_seed and old.get("engine") == engine:
            manifest["completed"] = old.get("completed", {})
    failures = {}
    stats_list = []
    for eta, p, beta, n in grid.points():
        key = point_key(eta, p, beta, n)
        part_path = parts / f"{key}.csv"
        try:
            if force or manifest["completed"].get(key) != grid.n_trajectories or not part_path.exists():
                params = CircuitParams(
                    n_qubits=n, p=p, eta=eta, beta=beta, engine=engine,
                    total_steps=total_steps_factor * n,
                    rel_threshold=rel_threshold, max_bond=max_bond,
                    magic_samples=magic_samples,
                )
                if log:
                    log(f"point {key}: {grid.n_trajectories} trajectories")
                records = simulate_point(params, master_seed, grid.n_trajectories, workers)
                tmp = part_path.with_suffix(".tmp")
                with open(tmp, "w", newline="") as fh:
                    csv.writer(fh).writerows(raw_rows(records))
                tmp.replace(part_path)
                manifest["completed"][key] = grid.n_trajectories
                manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n")
            else:
                records = None
            if records is None:
                records = read_records_from_part(part_path)
            stats_list.append(steady_state_stats(records))
        except Exception as exc:  # noqa: BLE001 - per-point containment
            failures[key] = f"{type(exc).__name__}: {exc}"
            if log:
                log(f"point {key} FAILED: {failures[key]}")
    raw_path = out / "raw.csv"
    with open(raw_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_HEADER)
        for eta, p, beta, n in grid.points():
            part_path = parts / f"{point_key(eta, p, beta, n)}.csv"
            if part_path.exists():
                fh.write(part_path.read_text())
    agg_path = out / "aggregate.csv"
    with open(agg_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGG_HEADER)
        for st in stats_list:
            writer.writerows(stats_rows(st))
    return SweepResult(raw_path, agg_path, manifest_path, stats_list, failures)


def read_raw_csv(path):
    """Raw rows as dicts with parsed numeric fields (magic may be None)."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "eta": float(rec["eta"]),
                    "p": float(rec["p"]),
                    "beta": float(rec["beta"]),
                    "N": int(rec["N"]),
                    "traj": int(rec["traj"]),
                    "seed": int(rec["seed"]),
                    "t": int(rec["t"]),
                    "entanglement": float(rec["entanglement"]),
                    "magic": float(rec["magic"]) if rec["magic"] else None,
                    "magic_err": float(rec["magic_err"]) if rec["magic_err"] else None,
                }
            )
    return rows


def read_records_from_part(part_path) -> list:
    """Rebuild minimal trajectory records from a part file (for re-stats)."""
    from .circuit import ObservableSample

    groups: dict = {}
    with open(part_path, newline="") as fh:
        for row in csv.reader(fh):
            eta, p, beta = float(row[0]), float(row[1]), float(row[2])
            n, traj, seed, t = int(row[3]), int(row[4]), int(row[5]), int(row[6])
            ent = float(row[7])
            magic = float(row[8]) if row[8] else None
            err = float(row[9]) if row[9] else None
            groups.setdefault((eta, p, beta, n, traj, seed), []).append(
                ObservableSample(t, ent, magic, err)
            )
    records = []
    for (eta, p, beta, n, traj, seed), samples in sorted(
        groups.items(), key=lambda kv: kv[0][4]
    ):
        params = CircuitParams(
            n_qubits=n, p=p, eta=eta, beta=beta,
            total_steps=max(s.t for s in samples),
        )
        records.append(
            TrajectoryRecord(params=params, seed=seed, samples=tuple(sorted(samples, key=lambda s: s.t)))
        )
    return records


def aggregate_from_raw(path) -> list:
    """Recompute EnsembleStats for every grid point present in a raw CSV."""
    from .circuit import ObservableSample

    rows = read_raw_csv(path)
    by_point: dict = {}
    for r in rows:
        by_point.setdefault((r["eta"], r["p"], r["beta"], r["N"]), {}).setdefault(
            (r["traj"], r["seed"]), []
        ).append(ObservableSample(r["t"], r["entanglement"], r["magic"], r["magic_err"]))
    out = []
    for key in sorted(by_point):
        eta, p, beta, n = key
        records = []
        for (traj, seed), samples in sorted(by_point[key].items()):
            params = CircuitParams(
                n_qubits=n, p=p, eta=eta, beta=beta,
                total_steps=max(s.t for s in samples),
            )
            records.append(
                TrajectoryRecord(params=params, seed=seed, samples=tuple(sorted(samples, key=lambda s: s.t)))
            )
        out.append(steady_state_stats(records))
    return out


def read_aggregate_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "eta": float(rec["eta"]),
                    "p": float(rec["p"]),
                    "beta": float(rec["beta"]),
                    "N": int(rec["N"]),
                    "quantity": rec["quantity"],
                    "mean": float(rec["mean"]),
                    "raw_std": float(rec["raw_std"]),
                    "rescaled_std": float(rec["rescaled_std"]),
                    "P": int(rec["P"]),
                    "n_traj": int(rec["n_traj"]),
                }
            )
    return rows
