import math

import numpy as np
import pytest

from miptkit.analysis import (
    CriticalPoint,
    FitResult,
    critical_rate,
    f_ratio,
    fit_scaling,
    mean_single_tgate_magic,
    separable_prediction,
)

NS = np.array([8, 12, 16, 24, 32, 48, 64], dtype=float)
LOG2_4_3 = math.log2(4.0 / 3.0)


def pts(y, sigma):
    return [(int(n), float(v), float(s)) for n, v, s in zip(NS, y, np.broadcast_to(sigma, y.shape))]


def test_noiseless_extensive_recovery():
    y = 2.0 + 0.5 * NS**0.5
    fr = fit_scaling(pts(y, 0.01), "extensive")
    assert abs(fr.a - 2.0) < 1e-4
    assert abs(fr.b - 0.5) < 1e-4
    assert abs(fr.gamma - 0.5) < 1e-4
    assert fr.chi2_per_dof < 1e-10
    assert fr.dof == len(NS) - 3


def test_noiseless_constant_area():
    y = np.full(len(NS), 3.0)
    fr = fit_scaling(pts(y, 0.01), "area")
    assert abs(fr.a - 3.0) < 1e-6
    assert max(abs(fr.b * n**fr.gamma) for n in NS) < 1e-6
    assert fr.chi2_per_dof < 1e-10
    assert fr.gamma <= 0


def test_log_law_fit():
    y = 1.0 + 0.7 * np.log(NS)
    fr = fit_scaling(pts(y, 0.01), "log")
    assert abs(fr.a - 1.0) < 1e-8 and abs(fr.b - 0.7) < 1e-8
    assert fr.gamma is None and fr.dof == len(NS) - 2


def test_seven_largest_points_used():
    many = [(n, 1.0 + 0.1 * n, 0.01) for n in (4, 8, 12, 16, 24, 32, 48, 64, 96)]
    fr = fit_scaling(many, "extensive")
    assert fr.n_points == 7


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit_scaling([(8, 1.0, 0.1)] * 3, "extensive")
    with pytest.raises(ValueError):
        fit_scaling([(8, 1.0, 0.0), (12, 1.0, 0.1), (16, 1.0, 0.1), (24, 1.0, 0.1)], "area")
    with pytest.raises(ValueError):
        fit_scaling(pts(NS * 0.1, 0.01), "cubic")


def test_chi2_invariances():
    rng = np.random.default_rng(3)
    y = 1.0 + 0.2 * NS**0.6 + rng.normal(0, 0.02, len(NS))
    base = fit_scaling(pts(y, 0.02), "extensive")
    shuffled = pts(y, 0.02)
    rng.shuffle(shuffled)
    assert fit_scaling(shuffled, "extensive") == base
    scaled = [(n, 5 * v, 5 * s) for n, v, s in pts(y, 0.02)]
    fr = fit_scaling(scaled, "extensive")
    assert abs(fr.chi2_per_dof - base.chi2_per_dof) < 1e-9
    assert abs(fr.gamma - base.gamma) < 1e-6


def test_gamma_constraints_respected():
    rng = np.random.default_rng(5)
    for _ in range(20):
        y = 1.0 + rng.normal(0, 0.05, len(NS))
        ext = fit_scaling(pts(y, 0.05), "extensive")
        area = fit_scaling(pts(y, 0.05), "area")
        assert ext.gamma >= 1e-4
        assert area.gamma <= 0


def test_noisy_gamma_recovery_and_chi2():
    rng = np.random.default_rng(11)
    gams, chis = [], []
    for _ in range(100):
        y = 1.0 + 0.1 * NS**0.4 + rng.normal(0, 0.01, len(NS))
        fr = fit_scaling(pts(y, 0.01), "extensive")
        gams.append(fr.gamma)
        chis.append(fr.chi2_per_dof)
    assert abs(np.median(gams) - 0.4) < 0.05
    assert 0.5 <= np.median(chis) <= 1.5


def test_f_ratio_basics():
    e = FitResult("extensive", 0, 0, 0.5, 1.0, 7, 4)
    a = FitResult("area", 0, 0, -0.5, 1.0, 7, 4)
    assert f_ratio(e, a) == 0.0
    with pytest.raises(ValueError):
        f_ratio(e, FitResult("area", 0, 0, -0.5, 0.0, 7, 4))
    with pytest.raises(ValueError):
        f_ratio(a, a)


def test_f_ratio_sign_discrimination():
    rng = np.random.default_rng(7)
    pos = neg = 0
    for _ in range(100):
        y_area = 2.0 - 3.0 * NS**-0.7 + rng.normal(0, 0.02, len(NS))
        p = pts(y_area, 0.02)
        pos += f_ratio(fit_scaling(p, "extensive"), fit_scaling(p, "area")) > 0
        y_ext = 0.5 + 0.05 * NS**0.8 + rng.normal(0, 0.02, len(NS))
        p = pts(y_ext, 0.02)
        neg += f_ratio(fit_scaling(p, "extensive"), fit_scaling(p, "area")) < 0
    assert pos >= 95 and neg >= 95


def test_critical_rate_linear_interpolation():
    cp = critical_rate([(0.1, -1.0), (0.2, 1.0)], [(0.1, -1.0), (0.2, 1.0)],
                       quantity="entanglement", eta=0.0)
    assert abs(cp.p_c - 0.15) < 1e-12
    assert abs(cp.sigma_a - 0.05) < 1e-12
    assert cp.sigma_b == 0.0
    assert abs(cp.sigma - 0.05) < 1e-12


def test_critical_rate_errors_and_caps():
    with pytest.raises(ValueError):
        critical_rate([(0.1, -2.0), (0.2, -1.0)], [(0.1, -2.0), (0.2, -1.0)])
    # never reaches +1 inside the scan: sigma_A capped and flagged
    cp = critical_rate([(0.1, -2.0), (0.2, 0.5)], [(0.1, -2.0), (0.2, 0.5)])
    assert cp.sigma_a_capped
    assert cp.p_c < 0.2


def test_critical_rate_monotone_consistency():
    base = [(0.10, -3.0), (0.14, -1.5), (0.18, 0.5), (0.22, 2.5)]
    cp0 = critical_rate(base, base)
    shifted = [(p, f + 0.4) for p, f in base]
    cp1 = critical_rate(shifted, shifted)
    assert cp1.p_c <= cp0.p_c + 1e-12


def test_critical_rate_multi_crossing_warns():
    wiggly = [(0.10, -1.0), (0.12, 0.5), (0.14, -0.5), (0.18, 2.0)]
    cp = critical_rate(wiggly, wiggly)
    assert any("multiple" in w for w in cp.warnings)


def _balanced_crossing_series(pstar, rng, sig=0.005, c=2.0, area_scale=12.0826585):
    ps = np.round(np.arange(0.10, 0.2401, 0.02), 10)
    series, restricted = [], []
    for p in ps:
        if p <= pstar:
            y = 1 + c * (pstar - p) / 0.07 * NS**0.4
        else:
            y = 1 - c * area_scale * (p - pstar) / 0.07 * NS**-0.4
        y = y + rng.normal(0, sig, len(NS))
        p_full = pts(y, sig)
        series.append((p, f_ratio(fit_scaling(p_full, "extensive"),
                                  fit_scaling(p_full, "area"))))
        p_res = [q for q in p_full if q[0] != 64]
        restricted.append((p, f_ratio(fit_scaling(p_res, "extensive"),
                                      fit_scaling(p_res, "area"))))
    return series, restricted


def test_planted_crossing_recovered():
    # family with misfit-balanced extensive/area branches so ln F swings
    # steeply and near-antisymmetrically through the planted p*
    rng = np.random.default_rng(20240101)
    for pstar in (0.15, 0.17, 0.19):
        errs = []
        for _ in range(30):
            series, restricted = _balanced_crossing_series(pstar, rng)
            errs.append(critical_rate(series, restricted).p_c - pstar)
        assert np.abs(np.array(errs)).max() < 0.005


def test_mean_single_tgate_magic_value():
    # 6 single-qubit stabilizer states: 4 equatorial gain log2(4/3), 2 poles 0
    assert abs(mean_single_tgate_magic() - (2.0 / 3.0) * LOG2_4_3) < 1e-12


def test_separable_prediction_values():
    m1bar = (2.0 / 3.0) * LOG2_4_3
    assert abs(separable_prediction(1.0, 0.5, 1.0, 64) - m1bar) < 1e-12
    assert abs(separable_prediction(1.0, 0.5, 1.0, 8) -
               separable_prediction(1.0, 0.5, 1.0, 184)) < 1e-12
    assert separable_prediction(1.0, 0.5, 2.0, 10**6) < 1e-5
    assert abs(separable_prediction(2.0, 0.25, 1.0, 16) - 2 * m1bar * 3.0) < 1e-12


def test_separable_prediction_rejects_edges():
    for bad_p in (0.0, 1.0):
        with pytest.raises(ValueError):
            separable_prediction(1.0, bad_p, 1.0, 8)
    with pytest.raises(ValueError):
        separable_prediction(1.0, 0.5, 0.0, 8)
