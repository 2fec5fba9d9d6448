import math
import random

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bcshubbard import ModelParams, df_dr, f, g, gap_residual, hole_dual, r_max, solve_gap
from bcshubbard import stationary_points


def _mp_f(r, p):
    b, mu, lam, gam, h = map(mp.mpf, (p.beta, p.mu, p.lam, p.gamma, p.h))
    r = mp.mpf(r)
    gg = mp.sqrt((mu - lam) ** 2 + gam * gam * r)
    return -gam * r + mp.log(mp.cosh(b * h) + mp.exp(-lam * b) * mp.cosh(b * gg)) / b


def mp_f(r, p, dps=50):
    with mp.workdps(dps):
        return _mp_f(r, p)


params = st.builds(ModelParams, st.floats(0.5, 50), st.floats(-2, 2), st.floats(-2, 2),
                   st.floats(0.5, 6), st.floats(-1, 1))


def test_g_examples():
    assert g(0, ModelParams(1, 1, 1, 2.6)) == 0.0
    assert g(0, ModelParams(1, 1, 0.575, 2.6)) == pytest.approx(0.425, abs=1e-15)
    assert g(0.25, ModelParams(1, 0.3, 0.3, 2.6)) == pytest.approx(1.3, abs=1e-15)


def test_f_trivial(kernels):
    assert f(0, ModelParams(1, 0, 0, 1, 0)) == pytest.approx(math.log(2), abs=1e-15)


def test_f_high_precision(kernels):
    p = ModelParams(7, 1, 0.575, 2.6, 0)
    assert f(0.1, p) == pytest.approx(float(mp_f(0.1, p)), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(params, st.floats(0, 0.3))
def test_f_matches_mpmath(p, r):
    assert f(r, p) == pytest.approx(float(mp_f(r, p)), rel=1e-13, abs=1e-13)


def test_f_no_overflow_large_beta(kernels):
    p = ModelParams(1e4, 1, -0.5, 2.6, 0.7)
    v = f(0.1, p)
    assert math.isfinite(v) and v == pytest.approx(float(mp_f(0.1, p)), rel=1e-12)


def test_df_dr_negative_at_high_temperature(kernels):
    rng = random.Random(0)
    for _ in range(200):
        gam = rng.uniform(0.5, 6)
        p = ModelParams(rng.uniform(0.01, 2 / gam * 0.999), rng.uniform(-2, 2),
                        rng.uniform(-2, 2), gam, rng.uniform(-1, 1))
        assert all(df_dr(r, p) < 0 for r in np.linspace(0, 0.5, 11))


def test_df_dr_vanishes_at_maximizer(kernels):
    p = ModelParams(30, 1, 0, 2.6, 0)
    r = solve_gap(p).r_beta
    assert r > 0 and abs(df_dr(r, p)) < 1e-12


def test_df_dr_finite_difference_example(kernels):
    p = ModelParams(7, 1, 0.575, 2.6, 0)
    fd = (f(0.05 + 1e-7, p) - f(0.05 - 1e-7, p)) / 2e-7
    assert df_dr(0.05, p) == pytest.approx(fd, rel=1e-6)


@settings(max_examples=300, deadline=None)
@given(params, st.floats(1e-3, 0.3))
def test_df_dr_matches_mp_derivative(p, r):
    with mp.workdps(40):
        ref = mp.diff(lambda x: _mp_f(x, p), mp.mpf(r))
    assert df_dr(r, p) == pytest.approx(float(ref), rel=1e-6, abs=1e-9)


def test_residual_sign_matches_slope(kernels):
    p = ModelParams(7, 1, 0.575, 2.6, 0)
    assert np.sign(gap_residual(0.1, p)) == np.sign(df_dr(0.1, p))


@settings(max_examples=300, deadline=None)
@given(params, st.floats(1e-4, 0.3))
def test_residual_sign_matches_slope_random(p, r):
    a, b = gap_residual(r, p), df_dr(r, p)
    assume(abs(b) > 1e-9)
    assert np.sign(a) == np.sign(b)


def test_residual_negative_without_solution(kernels):
    p = ModelParams(20, 2.0, 0.0, 2.6, 0.3)
    assert 2.6 <= 2 * abs(p.mu - p.lam)
    assert all(gap_residual(r, p) < 0 for r in np.linspace(1e-6, 1, 50))


def test_stationary_low_beta_at_most_one(kernels):
    rng = random.Random(1)
    for _ in range(300):
        p = ModelParams(1, rng.uniform(-2, 2), rng.uniform(-2, 2), 2.6, rng.uniform(-1, 1))
        assert len(stationary_points(p)) <= 1


def test_stationary_two_roots_dense_scan(kernels):
    p = ModelParams(7, 1, 0.575, 2.6, 0)
    sp = stationary_points(p)
    # dense sign scan of the slope over g in (0, 3)
    x = np.linspace(1e-6, 3, 10 ** 6)
    x0 = abs(p.mu - p.lam)
    x = x[x > x0]
    r = (x ** 2 - x0 ** 2) / p.gamma ** 2
    b, lam, gam = p.beta, p.lam, p.gamma
    h1 = gam / (2 * x) * np.tanh(b * x) - np.exp(lam * b - np.log(np.cosh(b * x))) - 1
    flips = np.nonzero(np.diff(np.sign(h1)))[0]
    assert len(sp) == 2 == len(flips)
    for s, i in zip(sp, flips):
        assert r[i] <= s <= r[i + 1]


def test_stationary_empty_when_no_room(kernels):
    assert stationary_points(ModelParams(0.5, 2.0, 0.0, 2.6, 0)) == ()


@settings(max_examples=300, deadline=None)
@given(params)
def test_cardinality(p):
    sp = stationary_points(p)
    assert len(sp) <= (1 if p.beta * p.gamma <= 6 else 2)
    assert all(s > 0 for s in sp)


@pytest.mark.parametrize("beta,positive", [(2.0, False), (2.1, True)])
def test_solve_gap_brackets_transition(kernels, beta, positive):
    assert (solve_gap(ModelParams(beta, 1, 0, 2.6, 0)).r_beta > 0) == positive


def _golden_max(fun, a, b, tol=1e-13):
    phi = (math.sqrt(5) - 1) / 2
    c, d = b - phi * (b - a), a + phi * (b - a)
    while b - a > tol:
        if fun(c) > fun(d):
            b, d = d, c
            c = b - phi * (b - a)
        else:
            a, c = c, d
            d = a + phi * (b - a)
    return 0.5 * (a + b)


def test_solve_gap_against_grid_scan(kernels):
    p = ModelParams(7, 1, 0.575, 2.6, 0)
    rs = np.linspace(0, 0.25, 10 ** 6 + 1)
    x0 = p.mu - p.lam
    gg = np.sqrt(x0 ** 2 + p.gamma ** 2 * rs)
    fv = -p.gamma * rs + np.logaddexp(0.0, -p.lam * p.beta + p.beta * gg
                                      + np.log1p(np.exp(-2 * p.beta * gg)) - math.log(2)) / p.beta
    i = int(np.argmax(fv))
    ref = _golden_max(lambda r: mp_f(r, p, 40), rs[max(i - 2, 0)], rs[i + 2], 1e-13)
    assert solve_gap(p).r_beta == pytest.approx(ref, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(params)
def test_solve_gap_invariants(p):
    gs = solve_gap(p)
    assert 0 <= gs.r_beta <= max(0.0, r_max(p)) + 1e-15
    assert gs.r_beta == max(gs.maximizers)
    for a in gs.maximizers:
        assert abs(f(a, p) - gs.f_at_max) <= 1e-12
        if a > 0:
            assert abs(gap_residual(a, p)) < 1e-12
    # nothing on a fine grid beats the reported supremum
    rs = np.linspace(0, max(r_max(p), 0) + 0.01, 400)
    assert max(f(float(r), p) for r in rs) <= gs.f_at_max + 1e-12
    if p.beta < 2 / p.gamma:
        assert gs.r_beta == 0


@settings(max_examples=200, deadline=None)
@given(params)
def test_solve_gap_dual_invariant(p):
    a, b = solve_gap(p), solve_gap(hole_dual(p))
    assert a.r_beta == pytest.approx(b.r_beta, abs=1e-12)


def test_monotone_in_gamma(kernels):
    for mu, lam, h, beta in [(1, 0, 0, 5), (1, 0.575, 0.1, 7), (0.3, -0.5, 0.4, 3)]:
        rs = []
        for gam in np.linspace(0.5, 6, 300):
            gs = solve_gap(ModelParams(beta, mu, lam, float(gam), h))
            if not gs.is_critical:
                rs.append(gs.r_beta)
        assert all(b >= a - 1e-12 for a, b in zip(rs, rs[1:]))


def test_monotone_in_field(kernels):
    for mu, lam, gam, beta in [(1, 0, 2.6, 5), (1, 0.575, 2.6, 20), (0.5, 0.5, 2.6, 10)]:
        rs = [solve_gap(ModelParams(beta, mu, lam, gam, float(h))).r_beta
              for h in np.linspace(0, 1.5, 300)]
        assert all(b <= a + 1e-12 for a, b in zip(rs, rs[1:]))


def test_first_order_point_is_critical(kernels):
    from bcshubbard import critical_temperature
    rec = critical_temperature(0.5, 0.5, 2.6, 0.0)
    lo, hi = rec.beta_c - 1e-6, rec.beta_c + 1e-6
    # refine the equal-height point and check both maxima are reported
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        gs = solve_gap(ModelParams(mid, 0.5, 0.5, 2.6, 0))
        if gs.is_critical:
            break
        if gs.r_beta > 0:
            hi = mid
        else:
            lo = mid
    assert gs.is_critical and len(gs.maximizers) == 2 and gs.maximizers[0] == 0.0
