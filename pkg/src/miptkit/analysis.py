"""Scaling-law fits, F-test model comparison, and critical-rate extraction.

Each steady-state curve y(N) +- sigma(N) is fit by weighted least squares to

    extensive:  f(N) = a + b N^gamma   with gamma >= 1e-4
    area:       f(N) = a + b N^gamma   with gamma in [-3, -1e-4]
    log:        f(N) = a + b ln N      (reported only; never enters F)

using the 7 largest system sizes.  The power laws are linear in (a, b) at
fixed gamma, so the profile chi^2 is scanned on a dense gamma grid and
refined by golden-section search; no general nonlinear solver is involved.

ln F(p) = ln(E_ext / E_area) with E = chi^2/dof is linearly interpolated in
p; the zero crossing is the critical rate p_c.  Its error combines the
interpolated distance to ln F = +-1 (sigma_A, capped at the scan boundary
when unreached) with the shift of the crossing after dropping the largest
system size (sigma_B), in quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clifford import CLIFFORD1_TABLE, T_GATE
from .exact import StateVector, exact_stabilizer_entropy

MAX_FIT_POINTS = 7
GAMMA_MIN = 1e-4
GAMMA_MAX = 3.0
_GRID_SIZE = 400
_GOLDEN_TOL = 1e-8

LAWS = ("extensive", "area", "log")


@dataclass(frozen=True)
class FitResult:
    law: str
    a: float
    b: float
    gamma: float | None
    chi2_per_dof: float
    n_points: int
    dof: int


def error_floor(n_traj: int, window_count: int) -> float:
    """Smallest meaningful rescaled error of a windowed trajectory average.

    Integer-valued observables (tableau entanglement) can produce exactly
    tied window averages, so the sample std over the window underestimates
    the true error as 0; the quantization unit of an average over `n_traj`
    trajectories, rescaled by sqrt(P), bounds it from below.
    """
    return 1.0 / (n_traj * math.sqrt(window_count))


@dataclass(frozen=True)
class CriticalPoint:
    p_c: float
    sigma_a: float
    sigma_b: float
    sigma: float
    quantity: str
    eta: float
    sigma_a_capped: bool = False
    warnings: tuple = ()


def _select_points(points):
    pts = sorted({(int(n), float(y), float(s)) for n, y, s in points})
    if len(pts) != len({n for n, _, _ in pts}):
        raise ValueError("duplicate system sizes in fit input")
    pts = pts[-MAX_FIT_POINTS:]
    if len(pts) < 4:
        raise ValueError("need at least 4 points to fit")
    bad = [(n, s) for n, _, s in pts if s <= 0]
    if bad:
        raise ValueError(f"non-positive errors at points {bad}")
    n = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts])
    s = np.array([p[2] for p in pts])
    return n, y, s


def _wls(design: np.ndarray, y: np.ndarray, sigma: np.ndarray):
    """Weighted least squares; returns (params, chi2)."""
    w = 1.0 / sigma
    a = design * w[:, None]
    b = y * w
    if np.linalg.matrix_rank(a) < design.shape[1]:
        raise ValueError("singular design matrix; system sizes degenerate")
    params, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = b - a @ params
    return params, float(resid @ resid)


def _power_profile(gammas: np.ndarray, n, y, sigma):
    """chi2(gamma), a(gamma), b(gamma) for f = a + b N^gamma, vectorized.

    The model is linear in (a, b) at fixed gamma, so the 2x2 weighted normal
    equations are solved in closed form across the whole gamma grid; chi2
    comes from explicit residuals (no cancellation in the noiseless limit).
    """
    w = 1.0 / sigma**2
    x = n[None, :] ** gammas[:, None]
    s00 = w.sum()
    s01 = x @ w
    s11 = (x * x) @ w
    sy0 = float((w * y).sum())
    sy1 = x @ (w * y)
    det = s00 * s11 - s01**2
    if np.any(det <= 0) or np.any(det < 1e-12 * s00 * s11):
        raise ValueError("singular design matrix; system sizes degenerate")
    b = (s00 * sy1 - s01 * sy0) / det
    a = (sy0 * s11 - s01 * sy1) / det
    resid = y[None, :] - a[:, None] - b[:, None] * x
    chi2 = (resid * resid) @ w
    return chi2, a, b


def _power_chi2(gamma: float, n, y, sigma):
    chi2, a, b = _power_profile(np.array([gamma]), n, y, sigma)
    return (float(a[0]), float(b[0])), float(chi2[0])


def _golden_min(fun, lo, hi, tol):
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return (a + b) / 2


def fit_scaling(points, law: str) -> FitResult:
    """Fit one scaling law to (N, mean, rescaled_std) points."""
    if law not in LAWS:
        raise ValueError(f"law must be one of {LAWS}")
    n, y, sigma = _select_points(points)
    if law == "log":
        design = np.stack([np.ones_like(n), np.log(n)], axis=1)
        (a, b), chi2 = _wls(design, y, sigma)
        dof = len(n) - 2
        return FitResult("log", float(a), float(b), None, chi2 / dof, len(n), dof)
    if law == "extensive":
        lo, hi = GAMMA_MIN, GAMMA_MAX
    else:
        lo, hi = -GAMMA_MAX, -GAMMA_MIN
    grid = np.linspace(lo, hi, _GRID_SIZE)
    chi2s, _, _ = _power_profile(grid, n, y, sigma)
    i = int(np.argmin(chi2s))
    blo = grid[max(i - 1, 0)]
    bhi = grid[min(i + 1, _GRID_SIZE - 1)]
    gamma = _golden_min(lambda g: _power_chi2(g, n, y, sigma)[1], blo, bhi, _GOLDEN_TOL)
    gamma = min(max(gamma, lo), hi)
    (a, b), chi2 = _power_chi2(gamma, n, y, sigma)
    dof = len(n) - 3
    return FitResult(law, float(a), float(b), float(gamma), chi2 / dof, len(n), dof)


def f_ratio(fit_ext: FitResult, fit_area: FitResult) -> float:
    """ln F = ln(E_ext / E_area); negative favors the extensive law."""
    if fit_ext.law != "extensive" or fit_area.law != "area":
        raise ValueError("f_ratio expects an extensive and an area fit")
    if fit_ext.n_points != fit_area.n_points:
        raise ValueError("fits must use identical points")
    if fit_area.chi2_per_dof == 0.0:
        raise ValueError("E_area is exactly zero (degenerate noiseless input)")
    with np.errstate(divide="ignore"):
        return float(np.log(fit_ext.chi2_per_dof / fit_area.chi2_per_dof))


def _crossings(ps, fs, level=0.0):
    """(p, segment index) of every interpolated crossing of `level`."""
    out = []
    for i in range(len(ps) - 1):
        f0, f1 = fs[i] - level, fs[i + 1] - level
        if f0 == 0.0:
            out.append((ps[i], i))
        elif f0 * f1 < 0:
            out.append((ps[i] + (ps[i + 1] - ps[i]) * (-f0) / (f1 - f0), i))
    if len(ps) and fs[-1] == level:
        out.append((ps[-1], len(ps) - 2))
    return out


def _pick_crossing(series, warnings_out):
    ps = [p for p, _ in series]
    fs = [f for _, f in series]
    crossings = _crossings(ps, fs)
    if not crossings:
        raise ValueError("no transition in scanned range (ln F has no sign change)")
    if len(crossings) > 1:
        mid = (ps[0] + ps[-1]) / 2
        crossings.sort(key=lambda c: abs(c[0] - mid))
        warnings_out.append(
            f"multiple ln F crossings ({len(crossings)}); chose the one nearest mid-scan"
        )
    return crossings[0][0]


def critical_rate(series, restricted_series, quantity: str = "", eta: float = 0.0) -> CriticalPoint:
    """Critical measurement rate from a (p, ln F) series.

    `restricted_series` is the same analysis with the largest system size
    dropped; its crossing shift yields sigma_B.
    """
    series = sorted((float(p), float(f)) for p, f in series)
    restricted = sorted((float(p), float(f)) for p, f in restricted_series)
    if len(series) < 2:
        raise ValueError("need at least two p values")
    warnings: list = []
    p_c = _pick_crossing(series, warnings)
    ps = [p for p, _ in series]
    fs = [f for _, f in series]
    capped = False
    legs = []
    for level in (-1.0, 1.0):
        cands = _crossings(ps, fs, level)
        if cands:
            p_level = min(cands, key=lambda c: abs(c[0] - p_c))[0]
        else:
            capped = True
            p_level = ps[0] if abs(fs[0] - level) < abs(fs[-1] - level) else ps[-1]
        legs.append(abs(p_level - p_c))
    sigma_a = max(legs)
    try:
        p_c_restricted = _pick_crossing(restricted, warnings)
        sigma_b = abs(p_c - p_c_restricted)
    except ValueError:
        sigma_b = min(abs(p_c - ps[0]), abs(p_c - ps[-1]))
        warnings.append("restricted series has no crossing; sigma_B capped at scan boundary")
    return CriticalPoint(
        p_c=p_c,
        sigma_a=sigma_a,
        sigma_b=sigma_b,
        sigma=math.hypot(sigma_a, sigma_b),
        quantity=quantity,
        eta=eta,
        sigma_a_capped=capped,
        warnings=tuple(warnings),
    )


@lru_cache(maxsize=1)
def mean_single_tgate_magic() -> float:
    """Average 2-Renyi magic of T applied to the 6 single-qubit stabilizer
    states (enumerated through the exact oracle)."""
    states = []
    base = np.array([1.0, 0.0], dtype=complex)
    seen = set()
    for g in CLIFFORD1_TABLE:
        v = g.unitary @ base
        v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v) > 1e-9)]))
        key = tuple(np.round(v, 9))
        if key not in seen:
            seen.add(key)
            states.append(v)
    assert len(states) == 6
    total = 0.0
    for v in states:
        sv = StateVector(1, T_GATE @ v)
        total += exact_stabilizer_entropy(sv, 2)
    return total / len(states)


def separable_prediction(eta: float, p: float, beta: float, n: int) -> float:
    """Steady-state magic of the single-site (non-entangling) circuit:
    eta * M1bar * (1-p)/p * N^(1-beta)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be strictly between 0 and 1")
    if beta <= 0:
        raise ValueError("beta must be positive")
    return eta * mean_single_tgate_magic() * (1.0 - p) / p * float(n) ** (1.0 - beta)
