import math

import pytest

from bcshubbard import (ModelParams, NoTransition, Order, OutsideWindow, PreconditionViolated,
                        classify_order, critical_temperature, fixed_density_zero_t, pressure,
                        second_order_beta_c, solve_gap)
from bcshubbard.observables import densities
from bcshubbard.phase import (CoexistenceSplit, chemical_potential_at_density, coexistence_densities,
                              coexistence_windows)


@pytest.fixture(scope="module")
def window():
    wins = coexistence_windows(30.0, 0.575, 2.6, 0.1)
    assert wins
    return max(wins, key=lambda w: w.d_minus)


@pytest.mark.parametrize("mu,lam", [(1.0, 0.0), (-0.5, -0.575), (-0.3, -0.3), (0.2, -0.6)])
def test_second_order_matches_scan(mu, lam):
    rec = critical_temperature(mu, lam, 2.6)
    assert rec.order is Order.SECOND
    assert second_order_beta_c(mu, lam, 2.6) == pytest.approx(rec.beta_c, rel=1e-4)


def test_second_order_half_filling_closed_form():
    lam = -0.4
    b = second_order_beta_c(lam, lam, 2.6)
    assert b == pytest.approx((2 / 2.6) * (1 + math.exp(lam * b)), rel=1e-12)


def test_second_order_preconditions():
    with pytest.raises(PreconditionViolated):
        second_order_beta_c(1.0, 0.1, 2.6)
    with pytest.raises(PreconditionViolated):
        second_order_beta_c(1.0, 0.0, 2.6, h=0.1)
    with pytest.raises(PreconditionViolated):
        second_order_beta_c(3.0, 0.0, 2.6)


def test_transition_record_invariants():
    for lam in (0.0, 0.45, 0.575):
        rec = critical_temperature(1.0, lam, 2.6)
        assert rec.monotone_flag
        b = rec.beta_c
        assert solve_gap(ModelParams(0.99 * b, 1, lam, 2.6)).r_beta == 0.0
        assert solve_gap(ModelParams(1.01 * b, 1, lam, 2.6)).r_beta > 0.0
        assert (rec.order is Order.FIRST) == (rec.r_jump > 1e-3)


def test_order_examples():
    assert classify_order(1.0, 0.575, 2.6).order is Order.FIRST
    with pytest.raises(NoTransition):
        classify_order(2.5, 0.0, 2.6, 1.5)
    assert critical_temperature(2.5, 0.0, 2.6, 1.5).order is Order.NONE


def test_beta_max_precondition():
    with pytest.raises(PreconditionViolated):
        critical_temperature(1.0, 0.0, 2.6, beta_max=0.5)


@pytest.mark.parametrize("beta,h", [(2.0, 0.0), (30.0, 0.3)])
def test_half_filling_potential(beta, h):
    assert chemical_potential_at_density(1.0, beta, 0.575, 2.6, h) == 0.575


@pytest.mark.parametrize("beta,h", [(30.0, 0.0), (10.0, 0.0), (30.0, 0.2)])
def test_superconducting_potential(beta, h):
    mu = chemical_potential_at_density(1.2, beta, 0.0, 2.6, h)
    assert mu == pytest.approx(0.26, abs=1e-14)


@pytest.mark.parametrize("rho", [0.3, 0.9, 1.5, 1.95])
def test_density_inverse(rho):
    mu = chemical_potential_at_density(rho, 2.0, 0.3, 1.0, 0.1)
    assert not isinstance(mu, CoexistenceSplit)
    p = ModelParams(2.0, mu, 0.3, 1.0, 0.1)
    assert densities(p, solve_gap(p).r_beta).d == pytest.approx(rho, abs=1e-10)


def test_density_domain():
    with pytest.raises(ValueError):
        chemical_potential_at_density(2.0, 1.0, 0.0, 1.0)


def test_window_branches(window):
    assert window.d_plus > window.d_minus
    assert window.pressure_gap < 1e-10
    lo = pressure(ModelParams(30.0, window.mu_c, 0.575, 2.6, 0.1))
    assert math.isfinite(lo)
    assert window.r_minus == 0.0 and window.r_plus > 0.0


def test_split_endpoints(window):
    a = coexistence_densities(window.d_minus, 30.0, 0.575, 2.6, 0.1, window=window)
    b = coexistence_densities(window.d_plus, 30.0, 0.575, 2.6, 0.1, window=window)
    assert a.split.tau == 0.0 and a.condensate == 0.0
    assert a.densities.m == window.m_minus and a.densities.w == window.w_minus
    assert b.split.tau == 1.0 and b.condensate == window.r_plus
    assert b.densities.m == window.m_plus and b.densities.w == window.w_plus


def test_split_midpoint_coexistence(window):
    rho = 0.5 * (window.d_minus + window.d_plus)
    mix = coexistence_densities(rho, 30.0, 0.575, 2.6, 0.1, window=window)
    assert mix.densities.m > 0 and mix.condensate > 0
    assert mix.condensate == pytest.approx(mix.split.tau * window.r_plus, rel=1e-15)
    s = mix.split
    assert s.e_minus == pytest.approx(-s.mu_c * rho - 0.1 * s.m_minus + 2 * 0.575 * s.w_minus)


def test_mirror_window_mixture():
    # below half filling the superconducting branch carries the lower density
    win = min(coexistence_windows(30.0, 0.575, 2.6, 0.1), key=lambda w: w.d_minus)
    assert win.r_minus > 0.0 and win.r_plus == 0.0 and win.d_plus > win.d_minus
    rho = win.d_minus + 0.25 * (win.d_plus - win.d_minus)
    mix = coexistence_densities(rho, 30.0, 0.575, 2.6, 0.1, window=win)
    assert mix.condensate == pytest.approx((1 - mix.split.tau) * win.r_minus, rel=1e-15)
    assert mix.densities.m > 0 and mix.condensate > 0


def test_split_found_by_inversion(window):
    rho = 0.5 * (window.d_minus + window.d_plus)
    res = chemical_potential_at_density(rho, 30.0, 0.575, 2.6, 0.1)
    assert isinstance(res, CoexistenceSplit)
    assert res.tau == pytest.approx(0.5, abs=1e-6)


def test_outside_window(window):
    with pytest.raises(OutsideWindow):
        window.split(window.d_plus + 0.01)
    with pytest.raises(OutsideWindow):
        coexistence_densities(1.2, 30.0, 0.0, 2.6, 0.0)


def test_fixed_density_zero_t():
    assert fixed_density_zero_t(1.0, 0.2, 2.6, 0.1) == 0.25
    assert fixed_density_zero_t(0.5, 0.2, 2.6, 0.0) == 0.1875
    assert fixed_density_zero_t(1.0, 0.575, 2.6, 0.1) is None
    assert fixed_density_zero_t(0.5, -0.3, 0.1, 0.0) == 0.1875
    with pytest.raises(ValueError):
        fixed_density_zero_t(0.0, 0.2, 2.6)
