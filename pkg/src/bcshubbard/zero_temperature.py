"""Closed-form zero-temperature limits, thresholds and the critical field."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ModelParams

BOUNDARY_TOL = 1e-12


class Regime(str, Enum):
    SUPERCONDUCTING = "Superconducting"
    INSULATOR = "Insulator"
    FERROMAGNETIC_MOTT = "FerromagneticMott"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class ZeroTObservables:
    r_inf: float
    d_inf: float
    m_inf: float
    w_inf: float
    e_inf: float
    regime: Regime


def gamma_threshold(x: float, y: float) -> float:
    """Minimal BCS coupling for a superconducting ground state at fixed chemical potential."""
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x >= y:
        return 2.0 * x
    if y > 0.0:
        return 2.0 * (y + math.sqrt(y * y - x * x))
    return 0.0


def gamma_threshold_density(x: float, y: float) -> float:
    """Same threshold at fixed electron density x."""
    if y < 0.0:
        return 0.0
    return 4.0 * y / (x * (x - 2.0) + 2.0)


def _sgn(x: float) -> float:
    return (x > 0.0) - (x < 0.0)


def zero_t_observables(p: ModelParams) -> ZeroTObservables:
    """beta -> infinity limits of (r, d, m, w, eps); beta is ignored."""
    mu, lam, gamma, h = p.mu, p.lam, p.gamma, p.h
    x = abs(mu - lam)
    y = lam + abs(h)
    gam_c = gamma_threshold(x, y)
    on_edge = abs(x - y) <= BOUNDARY_TOL
    boundary = on_edge or abs(gamma - gam_c) <= BOUNDARY_TOL
    if gamma > gam_c and not abs(gamma - gam_c) <= BOUNDARY_TOL:
        t = (mu - lam) / gamma
        r = 0.25 - t * t
        d = 1.0 + 2.0 * t
        m, w = 0.0, 0.5 * d
        regime = Regime.SUPERCONDUCTING
    else:
        r = 0.0
        dl = 1.0 if on_edge else 0.0
        dh = 1.0 if h == 0.0 else 0.0
        above = x >= y or on_edge
        below = x <= y or on_edge
        s = _sgn(mu - lam)
        d = 1.0 + s / (1.0 + dl * (1.0 + dh)) if above else 1.0
        m = _sgn(h) / (1.0 + dl) if below else 0.0
        w = (1.0 + s) / (2.0 * (1.0 + dl * (1.0 + dh))) if above else 0.0
        regime = Regime.INSULATOR if x > y else Regime.FERROMAGNETIC_MOTT
    if boundary:
        regime = Regime.BOUNDARY
    e = -mu * d - h * m + 2.0 * lam * w - gamma * r
    return ZeroTObservables(r, d, m, w, e, regime)


def mott_window(p: ModelParams) -> tuple[float, float] | None:
    """Range (x1, x2) of |mu - lambda| giving a Mott ground state, when 2y < gamma < 4y."""
    y = p.lam + abs(p.h)
    if not 2.0 * y < p.gamma < 4.0 * y:
        return None
    x1 = 0.5 * math.sqrt(p.gamma) * math.sqrt(4.0 * y - p.gamma)
    return x1, 0.5 * p.gamma


def critical_field(p: ModelParams) -> float | None:
    """Field above which superconductivity is lost at zero temperature."""
    x = abs(p.mu - p.lam)
    if not p.gamma > gamma_threshold(x, p.lam):
        return None
    return p.gamma * (0.25 + (x / p.gamma) ** 2) - p.lam
