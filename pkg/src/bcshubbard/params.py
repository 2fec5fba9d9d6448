"""Model parameters, density triples and the electron-hole map."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NonFinite, NonPositiveBeta, NonPositiveGamma

FIELDS = ("beta", "mu", "lambda", "gamma", "h")


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature, chemical potential, on-site repulsion, BCS coupling, field.

    ``lam`` holds the repulsion coupling since ``lambda`` is a keyword. Instances
    built directly are not checked; use :func:`validate` for untrusted input.
    """

    beta: float
    mu: float
    lam: float
    gamma: float
    h: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {"beta": self.beta, "mu": self.mu, "lambda": self.lam,
                "gamma": self.gamma, "h": self.h}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return validate(d["beta"], d["mu"], d["lambda"], d["gamma"], d.get("h", 0.0))

    def with_(self, **kw) -> "ModelParams":
        if "lambda" in kw:
            kw["lam"] = kw.pop("lambda")
        return replace(self, **kw)


@dataclass(frozen=True)
class DensityVector:
    d: float
    m: float
    w: float

    def satisfies_bounds(self, tol: float = 1e-12) -> bool:
        d, m, w = self.d, self.m, self.w
        wmax = 0.5 * math.sqrt(max(d * d - m * m, 0.0))
        return (-tol <= w <= wmax + tol and abs(m) <= d + tol
                and abs(m) <= 2.0 - d + tol)


def validate(beta, mu, lam, gamma, h=0.0) -> ModelParams:
    """Check the five raw numbers and return a ModelParams.

    Raises the subclass of ValidationError naming the first violated bound.
    """
    vals = []
    for name, v in zip(FIELDS, (beta, mu, lam, gamma, h)):
        try:
            x = float(v)
        except (TypeError, ValueError):
            raise NonFinite(f"{name}={v!r} is not a real number") from None
        if not math.isfinite(x):
            raise NonFinite(f"{name}={v!r} is not finite")
        vals.append(x)
    beta, mu, lam, gamma, h = vals
    if beta <= 0.0:
        raise NonPositiveBeta(f"beta={beta!r} violates beta > 0")
    if gamma <= 0.0:
        raise NonPositiveGamma(f"gamma={gamma!r} violates gamma > 0")
    return ModelParams(beta, mu, lam, gamma, h)


def hole_dual(p: ModelParams) -> ModelParams:
    """Electron-hole transform (mu, h) -> (2 lambda - mu, -h)."""
    return replace(p, mu=2.0 * p.lam - p.mu, h=-p.h)
