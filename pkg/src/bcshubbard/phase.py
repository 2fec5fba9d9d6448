"""Critical temperatures, transition order, and thermodynamics at fixed filling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NoTransition, OutsideWindow, PreconditionViolated
from .free_energy import f, solve_gap
from .observables import densities
from .params import DensityVector, ModelParams
from .zero_temperature import gamma_threshold, gamma_threshold_density

JUMP_TOL = 1e-3
ORDER_OFFSET = 1e-5
BETA_WIDTH = 1e-6
N_SCAN = 200
# a density step wider than this between adjacent floats is a genuine jump
D_JUMP = 1e-8


class Order(str, Enum):
    FIRST = "First"
    SECOND = "Second"
    NONE = "None"


@dataclass(frozen=True)
class TransitionRecord:
    theta_c: float | None
    order: Order
    r_jump: float
    monotone_flag: bool

    @property
    def beta_c(self) -> float | None:
        return None if self.theta_c is None else 1.0 / self.theta_c


def _r(beta, mu, lam, gamma, h) -> float:
    return solve_gap(ModelParams(beta, mu, lam, gamma, h)).r_beta


def critical_temperature(mu: float, lam: float, gamma: float, h: float = 0.0,
                         beta_max: float = 100.0) -> TransitionRecord:
    """Temperature below which r_beta > 0, from a geometric beta scan plus bisection.

    Re-entrance is not assumed away: more than one sign change clears
    ``monotone_flag`` and the smallest transition beta is reported.
    """
    if not beta_max > 2.0 / gamma:
        raise PreconditionViolated("beta_max must exceed 2/gamma")
    grid = np.geomspace(1.0 / gamma, beta_max, N_SCAN)
    ind = [_r(b, mu, lam, gamma, h) > 0.0 for b in grid]
    flips = [i for i in range(1, N_SCAN) if ind[i] != ind[i - 1]]
    if not flips:
        return TransitionRecord(None, Order.NONE, 0.0, True)
    i = flips[0]
    lo, hi = float(grid[i - 1]), float(grid[i])
    while hi - lo > BETA_WIDTH:
        mid = 0.5 * (lo + hi)
        if _r(mid, mu, lam, gamma, h) > 0.0:
            hi = mid
        else:
            lo = mid
    beta_c = 0.5 * (lo + hi)
    jump = (_r(beta_c + ORDER_OFFSET, mu, lam, gamma, h)
            - _r(beta_c - ORDER_OFFSET, mu, lam, gamma, h))
    order = Order.FIRST if jump > JUMP_TOL else Order.SECOND
    return TransitionRecord(1.0 / beta_c, order, jump if order is Order.FIRST else 0.0,
                            len(flips) == 1)


def classify_order(mu: float, lam: float, gamma: float, h: float = 0.0,
                   beta_max: float = 100.0) -> TransitionRecord:
    rec = critical_temperature(mu, lam, gamma, h, beta_max)
    if rec.order is Order.NONE:
        raise NoTransition(f"r_beta = 0 for all beta <= {beta_max}")
    return rec


def second_order_beta_c(mu: float, lam: float, gamma: float, h: float = 0.0) -> float:
    """Root of tanh(beta x)/x = (2/gamma)(1 + e^{lam beta}/cosh(beta x)), x = |mu - lam|."""
    if lam > 0.0 or h != 0.0:
        raise PreconditionViolated("requires lambda <= 0 and h = 0")
    x = abs(mu - lam)
    if not gamma > gamma_threshold(x, lam):
        raise PreconditionViolated("requires gamma above the zero-temperature threshold")

    def resid(b):
        bx = b * x
        lhs = b if bx < 1e-8 else math.tanh(bx) / x
        ln_ch = bx + math.log1p(math.exp(-2.0 * bx)) - math.log(2.0)
        return lhs - (2.0 / gamma) * (1.0 + math.exp(lam * b - ln_ch))

    lo = hi = 2.0 / gamma
    while resid(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e8:
            raise PreconditionViolated("no root below beta = 1e8")
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if resid(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---- fixed electron density ---------------------------------------------


@dataclass(frozen=True)
class CoexistenceWindow:
    """Both branches at a first-order chemical potential."""

    beta: float
    lam: float
    gamma: float
    h: float
    mu_c: float
    r_minus: float
    r_plus: float
    d_minus: float
    d_plus: float
    m_minus: float
    m_plus: float
    w_minus: float
    w_plus: float
    pressure_gap: float

    def contains(self, rho: float) -> bool:
        return self.d_minus <= rho <= self.d_plus

    def split(self, rho: float) -> "CoexistenceSplit":
        if not self.contains(rho):
            raise OutsideWindow(f"rho={rho} outside [{self.d_minus}, {self.d_plus}]")
        tau = (rho - self.d_minus) / (self.d_plus - self.d_minus)

        def eps(m, w, r):
            return -self.mu_c * rho - self.h * m + 2.0 * self.lam * w - self.gamma * r

        return CoexistenceSplit(self.mu_c, self.d_minus, self.d_plus, self.r_plus,
                                self.m_minus, self.m_plus, self.w_minus, self.w_plus,
                                eps(self.m_minus, self.w_minus, self.r_minus),
                                eps(self.m_plus, self.w_plus, self.r_plus), tau,
                                self.r_minus)


@dataclass(frozen=True)
class CoexistenceSplit:
    mu_c: float
    d_minus: float
    d_plus: float
    r_plus: float
    m_minus: float
    m_plus: float
    w_minus: float
    w_plus: float
    e_minus: float
    e_plus: float
    tau: float
    r_minus: float = 0.0


@dataclass(frozen=True)
class MixedPhase:
    densities: DensityVector
    condensate: float
    energy_per_site: float
    split: CoexistenceSplit


def _density(mu, beta, lam, gamma, h) -> float:
    p = ModelParams(beta, mu, lam, gamma, h)
    return densities(p, solve_gap(p).r_beta).d


def _bisect_floats(pred, lo: float, hi: float) -> tuple[float, float]:
    # pred(lo) False, pred(hi) True; shrink to adjacent doubles
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo, hi
        if pred(mid):
            hi = mid
        else:
            lo = mid


def _window_at(lo: float, hi: float, beta, lam, gamma, h) -> CoexistenceWindow | None:
    p_lo = ModelParams(beta, lo, lam, gamma, h)
    p_hi = ModelParams(beta, hi, lam, gamma, h)
    g_lo, g_hi = solve_gap(p_lo), solve_gap(p_hi)
    dv_lo, dv_hi = densities(p_lo, g_lo.r_beta), densities(p_hi, g_hi.r_beta)
    if dv_hi.d - dv_lo.d <= D_JUMP:
        return None
    # lo and hi are adjacent doubles: each branch is its own side's maximizer
    pc = p_hi
    r_minus, r_plus = g_lo.r_beta, g_hi.r_beta
    return CoexistenceWindow(beta, lam, gamma, h, hi, r_minus, r_plus, dv_lo.d, dv_hi.d,
                             dv_lo.m, dv_hi.m, dv_lo.w, dv_hi.w,
                             abs(f(r_plus, pc) - f(r_minus, pc)))


def _mu_bracket(rho, beta, lam, gamma, h) -> tuple[float, float]:
    half = 1.0
    while True:
        lo, hi = lam - half, lam + half
        if _density(lo, beta, lam, gamma, h) < rho < _density(hi, beta, lam, gamma, h):
            return lo, hi
        half *= 2.0
        if half > 1e6:
            raise RuntimeError(f"cannot bracket density {rho}")


def chemical_potential_at_density(rho: float, beta: float, lam: float, gamma: float,
                                  h: float = 0.0) -> float | CoexistenceSplit:
    """mu giving electron density rho, or the coexistence split if rho sits in a density jump."""
    if not 0.0 < rho < 2.0:
        raise ValueError("rho must lie in (0, 2)")
    if rho == 1.0:
        return lam  # d = 1 identically at mu = lambda
    mu_sc = 0.5 * gamma * (rho - 1.0) + lam
    p = ModelParams(beta, mu_sc, lam, gamma, h)
    gs = solve_gap(p)
    if gs.r_beta > 0.0 and not gs.is_critical:
        if abs(densities(p, gs.r_beta).d - rho) < 1e-10:
            return mu_sc
    lo, hi = _mu_bracket(rho, beta, lam, gamma, h)
    lo, hi = _bisect_floats(lambda m: _density(m, beta, lam, gamma, h) > rho, lo, hi)
    win = _window_at(lo, hi, beta, lam, gamma, h)
    if win is None:
        d_lo = _density(lo, beta, lam, gamma, h)
        d_hi = _density(hi, beta, lam, gamma, h)
        return lo if abs(d_lo - rho) <= abs(d_hi - rho) else hi
    return win.split(rho)


def coexistence_windows(beta: float, lam: float, gamma: float, h: float = 0.0,
                        n_scan: int = 400) -> list[CoexistenceWindow]:
    """All first-order density jumps along mu, from a scan of the superconducting indicator."""
    mus = np.linspace(lam - 0.5 * gamma - 0.5, lam + 0.5 * gamma + 0.5, n_scan)

    def sc(m):
        return solve_gap(ModelParams(beta, m, lam, gamma, h)).r_beta > 0.0

    ind = [sc(float(m)) for m in mus]
    out = []
    for i in range(1, n_scan):
        if ind[i] == ind[i - 1]:
            continue
        a, b = float(mus[i - 1]), float(mus[i])
        if ind[i - 1]:
            # superconducting on the left: bisect the mirror predicate
            lo, hi = _bisect_floats(lambda m: not sc(m), a, b)
        else:
            lo, hi = _bisect_floats(sc, a, b)
        win = _window_at(lo, hi, beta, lam, gamma, h)
        if win is not None:
            out.append(win)
    return out


def coexistence_densities(rho: float, beta: float, lam: float, gamma: float, h: float = 0.0,
                          window: CoexistenceWindow | None = None) -> MixedPhase:
    """Convex mixture of the two branches at fixed filling inside [d-, d+]."""
    if window is None:
        res = chemical_potential_at_density(rho, beta, lam, gamma, h)
        if not isinstance(res, CoexistenceSplit):
            raise OutsideWindow(f"rho={rho} is not inside a coexistence interval")
        s = res
    else:
        s = window.split(rho)
    t = s.tau
    m = (1.0 - t) * s.m_minus + t * s.m_plus
    w = (1.0 - t) * s.w_minus + t * s.w_plus
    e = (1.0 - t) * s.e_minus + t * s.e_plus
    # equals tau * r_plus whenever the lower-density branch is normal
    r = (1.0 - t) * s.r_minus + t * s.r_plus
    return MixedPhase(DensityVector(rho, m, w), r, e, s)


def fixed_density_zero_t(rho: float, lam: float, gamma: float, h: float = 0.0) -> float | None:
    """Zero-temperature condensate at filling rho; None marks the unresolved mixture regime."""
    if not 0.0 < rho < 2.0:
        raise ValueError("rho must lie in (0, 2)")
    if gamma > max(gamma_threshold_density(rho, lam + abs(h)), 0.0):
        return rho * (2.0 - rho) / 4.0
    return None
