"""The scalar functional f(r) whose supremum gives the pressure, and its maximizers."""

from __future__ import annotations

from dataclasses import dataclass

from . import _backend
from .params import ModelParams

_k = _backend.kernels

TIE_TOL = 1e-12
MERGE_TOL = 1e-10


@dataclass(frozen=True)
class GapSolution:
    maximizers: tuple[float, ...]
    r_beta: float
    f_at_max: float
    stationary_points: tuple[float, ...]
    is_critical: bool


def g(r: float, p: ModelParams) -> float:
    return _k.gap_energy(r, p.mu, p.lam, p.gamma)


def r_max(p: ModelParams) -> float:
    x = (p.mu - p.lam) / p.gamma
    return 0.25 - x * x


def f(r: float, p: ModelParams) -> float:
    return _k.free_energy(r, p.beta, p.mu, p.lam, p.gamma, p.h)


def df_dr(r: float, p: ModelParams) -> float:
    return _k.free_energy_slope(r, p.beta, p.mu, p.lam, p.gamma, p.h)


def gap_residual(r: float, p: ModelParams) -> float:
    """tanh(beta g) minus the right-hand side of the gap equation."""
    return _k.gap_residual(r, p.beta, p.mu, p.lam, p.gamma, p.h)


def stationary_points(p: ModelParams) -> tuple[float, ...]:
    """Strictly positive critical points of f, ascending.

    When two exist the first is a local minimum and the second a local maximum.
    """
    return _k.stationary_points(p.beta, p.mu, p.lam, p.gamma, p.h)


def solve_gap(p: ModelParams, tie_tol: float = TIE_TOL) -> GapSolution:
    maxs, fmax, sp = _k.solve_core(p.beta, p.mu, p.lam, p.gamma, p.h, tie_tol, MERGE_TOL)
    return GapSolution(maxs, maxs[-1], fmax, sp, len(maxs) > 1)
