"""Pressure and equilibrium densities at a parameter point."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from .free_energy import GapSolution, solve_gap
from .params import DensityVector, ModelParams

_k = _backend.kernels
LN2 = math.log(2.0)


@dataclass(frozen=True)
class ObservableSet:
    pressure: float
    r: float
    densities: DensityVector
    energy_per_site: float
    from_maximizer: int = 0


@dataclass(frozen=True)
class DiscontinuityReport:
    """A first-order transition sits inside the finite-difference stencil."""

    beta_lo: float
    beta_hi: float
    r_lo: float
    r_hi: float
    energy_lo: float
    energy_hi: float


def pressure(p: ModelParams, gs: GapSolution | None = None) -> float:
    if gs is None:
        gs = solve_gap(p)
    return LN2 / p.beta + p.mu + gs.f_at_max


def _parts(p: ModelParams, r: float):
    # (g, ln D, singles weight S) with D = e^{lam beta} cosh(beta h) + cosh(beta g)
    b = p.beta
    g = _k.gap_energy(r, p.mu, p.lam, p.gamma)
    lnd = _k.ln_denominator(g, b, p.lam, p.h)
    s = math.exp(p.lam * b + _k.lncosh(b * p.h) - lnd)
    return g, lnd, s


def _lnsinh(x: float) -> float:
    # ln sinh(x), x > 0
    return math.log(x) + _k.lnsinhc(x)


def _pair_ratio(p: ModelParams, r: float, g: float, lnd: float) -> float:
    # (mu - lam) sinh(beta g) / (g D)
    b = p.beta
    return (p.mu - p.lam) * b * math.exp(_k.lnsinhc(b * g) - lnd)


def electron_density(p: ModelParams, r: float) -> float:
    g, lnd, _ = _parts(p, r)
    return 1.0 + _pair_ratio(p, r, g, lnd)


def magnetization(p: ModelParams, r: float) -> float:
    b = p.beta
    if b * p.h == 0.0:
        return 0.0
    g, lnd, _ = _parts(p, r)
    return math.copysign(math.exp(p.lam * b + _lnsinh(b * abs(p.h)) - lnd), p.h)


def coulomb_correlation(p: ModelParams, r: float) -> float:
    """Half of d minus the singles weight; m coth(beta h) equals that weight exactly.

    This form is smooth in h, so no small-field crossover is needed.
    """
    g, lnd, _ = _parts(p, r)
    b = p.beta
    x0 = p.mu - p.lam
    if g == 0.0:
        return 0.5 * math.exp(-lnd)
    # w = [a+ e^{bg} + a- e^{-bg}] / (4D) with a_pm = (g pm x0)/g;
    # the cancelling numerator is rationalised to gamma^2 r / (g + |x0|)
    big = (g + abs(x0)) / g
    small = p.gamma * p.gamma * r / ((g + abs(x0)) * g)
    ap, am = (big, small) if x0 >= 0.0 else (small, big)
    return 0.25 * (ap * math.exp(b * g - lnd) + am * math.exp(-b * g - lnd))


def mean_energy(p: ModelParams, obs: DensityVector, r: float) -> float:
    return -p.mu * obs.d - p.h * obs.m + 2.0 * p.lam * obs.w - p.gamma * r


def densities(p: ModelParams, r: float) -> DensityVector:
    return DensityVector(electron_density(p, r), magnetization(p, r),
                         coulomb_correlation(p, r))


def observable_set(p: ModelParams, gs: GapSolution | None = None) -> tuple[ObservableSet, ...]:
    """One ObservableSet per maximizer; two only at a first-order critical point."""
    if gs is None:
        gs = solve_gap(p)
    pr = pressure(p, gs)
    out = []
    for i, r in enumerate(gs.maximizers):
        dv = densities(p, r)
        out.append(ObservableSet(pr, r, dv, mean_energy(p, dv, r), i))
    return tuple(out)


def energy(p: ModelParams, r: float | None = None) -> float:
    if r is None:
        r = solve_gap(p).r_beta
    return mean_energy(p, densities(p, r), r)


def _levels(p: ModelParams, r: float) -> tuple[list[float], int, float]:
    """Mean-field one-site levels, index of the lowest, and its slope in r."""
    g = _k.gap_energy(r, p.mu, p.lam, p.gamma)
    x0 = p.mu - p.lam
    lv = [-p.mu - p.h, -p.mu + p.h, -x0 - g, -x0 + g]
    i0 = min(range(4), key=lv.__getitem__)
    slope = 0.0
    if i0 == 2 and g > 0.0:
        slope = -0.5 * p.gamma * p.gamma / g
    return lv, i0, slope


def _excitation_energy(p: ModelParams, r: float) -> float:
    # sum_k p_k (E_k - E_0): exponentially small at low temperature, kept to full relative precision
    lv, i0, _ = _levels(p, r)
    lw = [-p.beta * (e - lv[i0]) for e in lv]
    z = 0.0
    for x in lw:
        z += math.exp(x)
    return sum(math.exp(x) * (e - lv[i0]) for x, e in zip(lw, lv)) / z


def specific_heat(p: ModelParams, dbeta: float | None = None,
                  jump_tol: float = 1e-3) -> float | DiscontinuityReport:
    """-beta^2 d(eps)/d(beta) by central difference, with C_beta taken as 0.

    eps = [E_0 + gamma r] + sum_k p_k (E_k - E_0) over the mean-field one-site
    levels. The second part is differenced directly; the first only moves
    through r, so its derivative is (dE_0/dr + gamma) dr/dbeta. This avoids
    differencing O(1) numbers when c is exponentially small.
    """
    if dbeta is None:
        dbeta = 1e-4 * p.beta
    if not dbeta > 0.0:
        raise ValueError("dbeta must be positive")
    lo = p.with_(beta=p.beta - dbeta)
    hi = p.with_(beta=p.beta + dbeta)
    g_lo, g_mid, g_hi = solve_gap(lo), solve_gap(p), solve_gap(hi)
    r_lo, r_mid, r_hi = g_lo.r_beta, g_mid.r_beta, g_hi.r_beta
    branch = [r > 0.0 for r in (r_lo, r_mid, r_hi)]
    if (len(set(branch)) > 1 or g_mid.is_critical) and abs(r_hi - r_lo) > jump_tol:
        return DiscontinuityReport(lo.beta, hi.beta, r_lo, r_hi,
                                   energy(lo, r_lo), energy(hi, r_hi))
    i_lo, i_mid, i_hi = (_levels(q, r)[1] for q, r in ((lo, r_lo), (p, r_mid), (hi, r_hi)))
    if i_lo == i_mid == i_hi:
        drdb = (r_hi - r_lo) / (2.0 * dbeta)
        smooth = (_levels(p, r_mid)[2] + p.gamma) * drdb
        excit = (_excitation_energy(hi, r_hi) - _excitation_energy(lo, r_lo)) / (2.0 * dbeta)
        return -p.beta * p.beta * (smooth + excit)
    return -p.beta * p.beta * (energy(hi, r_hi) - energy(lo, r_lo)) / (2.0 * dbeta)
