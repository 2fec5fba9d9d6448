"""Exact finite-lattice Gibbs states by diagonalisation, for cross-checks.

Basis: site-major, per-site occupation {0, up, down, updown} encoded as
n_up + 2 n_down in base 4, site 0 most significant. Fermion modes are
ordered (0 up, 0 down, 1 up, ...) for the Jordan-Wigner signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.special import logsumexp

from .errors import DimensionTooLarge
from .params import DensityVector, ModelParams

MAX_SITES = 6
UP, DOWN = 0, 1


def _bit(n: int, x: int, s: int) -> int:
    return 2 * (n - 1 - x) + s


@lru_cache(maxsize=None)
def annihilator(n: int, x: int, s: int) -> sp.csr_matrix:
    """a_{x,s} on the 4^n-dimensional Fock space."""
    dim = 4 ** n
    states = np.arange(dim, dtype=np.int64)
    b = _bit(n, x, s)
    occ = (states >> b) & 1
    # modes preceding (x, s) in JW order: all of sites < x, plus (x, up) if s is down
    before = 0
    for y in range(x):
        before |= 3 << (2 * (n - 1 - y))
    if s == DOWN:
        before |= 1 << _bit(n, x, UP)
    parity = np.zeros(dim, dtype=np.int64)
    masked = states & before
    for k in range(2 * n):
        parity ^= (masked >> k) & 1
    src = states[occ == 1]
    sign = 1.0 - 2.0 * parity[occ == 1]
    dst = src ^ (1 << b)
    return sp.csr_matrix((sign, (dst, src)), shape=(dim, dim))


def creator(n: int, x: int, s: int) -> sp.csr_matrix:
    return annihilator(n, x, s).T.tocsr()


def number(n: int, x: int, s: int) -> sp.csr_matrix:
    return (creator(n, x, s) @ annihilator(n, x, s)).tocsr()


def pair(n: int, x: int) -> sp.csr_matrix:
    """a_{x,down} a_{x,up}."""
    return (annihilator(n, x, DOWN) @ annihilator(n, x, UP)).tocsr()


def hamiltonian(n: int, p: ModelParams, alpha: float = 0.0, phi: float = 0.0) -> sp.csr_matrix:
    """H_N, optionally minus alpha sum_x (e^{-i phi} a_dn a_up + h.c.)."""
    dim = 4 ** n
    H = sp.csr_matrix((dim, dim))
    pairs = [pair(n, x) for x in range(n)]
    for x in range(n):
        nu, nd = number(n, x, UP), number(n, x, DOWN)
        H = H - p.mu * (nu + nd) - p.h * (nu - nd) + 2.0 * p.lam * (nu @ nd)
    B = sum(pairs[1:], pairs[0])
    H = H - (p.gamma / n) * (B.T @ B)
    if alpha != 0.0:
        z = np.exp(-1j * phi)
        H = H - alpha * (z * B + np.conj(z) * B.T)
    return H.tocsr()


def singles_blocks(n: int) -> list[np.ndarray]:
    """Basis indices grouped by which sites are singly occupied, and by which spin.

    The pair terms only move pairs between empty and doubly occupied sites,
    so each group spans an invariant subspace of dimension 2^(paired sites).
    """
    states = np.arange(4 ** n, dtype=np.int64)
    key = np.zeros_like(states)
    for x in range(n):
        loc = (states >> (2 * (n - 1 - x))) & 3
        code = np.where(loc == 1, 1, np.where(loc == 2, 2, 0))
        key = key * 3 + code
    order = np.argsort(key, kind="stable")
    _, starts = np.unique(key[order], return_index=True)
    return np.split(order, starts[1:])


@dataclass
class _Thermal:
    n: int
    beta: float
    log_z: float
    rho: sp.csr_matrix

    def expect(self, A) -> complex:
        return complex(self.rho.multiply(A.T).sum())


def _thermal(n: int, p: ModelParams, alpha: float = 0.0, phi: float = 0.0,
             method: str = "blocks") -> _Thermal:
    if n > MAX_SITES:
        raise DimensionTooLarge(f"n={n} exceeds {MAX_SITES} (dimension {4 ** n})")
    if n < 1:
        raise ValueError("n must be at least 1")
    H = hamiltonian(n, p, alpha, phi)
    dim = 4 ** n
    if method == "dense":
        groups = [np.arange(dim)]
    elif method == "blocks":
        groups = singles_blocks(n)
    else:
        raise ValueError(f"unknown method {method!r}")
    parts = []
    for idx in groups:
        sub = H[idx][:, idx].toarray()
        evals, evecs = scipy.linalg.eigh(sub)
        parts.append((idx, evals, evecs))
    all_e = np.concatenate([e for _, e, _ in parts])
    log_z = float(logsumexp(-p.beta * all_e))
    rows, cols, vals = [], [], []
    for idx, e, v in parts:
        wts = np.exp(-p.beta * e - log_z)
        rb = (v * wts) @ v.conj().T
        ii, jj = np.meshgrid(idx, idx, indexing="ij")
        rows.append(ii.ravel())
        cols.append(jj.ravel())
        vals.append(rb.ravel())
    rho = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                        shape=(dim, dim))
    return _Thermal(n, p.beta, log_z, rho)


@dataclass(frozen=True)
class FiniteLatticeResult:
    n_sites: int
    pressure_n: float
    condensate_n: float
    densities: DensityVector
    energy_per_site: float


def finite_pressure(n: int, p: ModelParams, method: str = "blocks") -> FiniteLatticeResult:
    """p_N = ln Tr exp(-beta H_N) / (beta N) and one-site densities of the Gibbs state."""
    th = _thermal(n, p, method=method)
    B = sum((pair(n, x) for x in range(1, n)), pair(n, 0))
    cond = th.expect(B.T @ B).real / (n * n)
    d = m = w = 0.0
    for x in range(n):
        nu, nd = number(n, x, UP), number(n, x, DOWN)
        d += th.expect(nu + nd).real
        m += th.expect(nu - nd).real
        w += th.expect(nu @ nd).real
    e = th.expect(hamiltonian(n, p)).real / n
    return FiniteLatticeResult(n, th.log_z / (p.beta * n), cond,
                               DensityVector(d / n, m / n, w / n), e)


def finite_condensate(n: int, p: ModelParams) -> float:
    return finite_pressure(n, p).condensate_n


def pair_correlation(n: int, p: ModelParams, x: int, y: int) -> float:
    """omega_N(a*_{x up} a*_{x dn} a_{y dn} a_{y up}) for fixed sites x, y."""
    th = _thermal(n, p)
    return th.expect(pair(n, x).T @ pair(n, y)).real


def quasi_average(n: int, alpha: float, phi: float, p: ModelParams,
                  method: str = "blocks") -> complex:
    """(1/N) sum_x <a_{x,dn} a_{x,up}> under the symmetry-breaking perturbation."""
    th = _thermal(n, p, alpha, phi, method)
    B = sum((pair(n, x) for x in range(1, n)), pair(n, 0))
    return th.expect(B) / n


# ---- one-site states ------------------------------------------------------


@dataclass(frozen=True)
class OneSiteState:
    c: complex
    rho: np.ndarray
    expectations: dict

    def __getitem__(self, key):
        return self.expectations[key]


def one_site_operators() -> dict[str, np.ndarray]:
    au, ad = annihilator(1, 0, UP).toarray(), annihilator(1, 0, DOWN).toarray()
    cu, cd = au.T, ad.T
    nu, nd = cu @ au, cd @ ad
    phi_op = cd @ cu + au @ ad
    psi_op = 1j * (cd @ cu - au @ ad)
    return {
        "identity": np.eye(4), "n_up": nu, "n_down": nd, "n": nu + nd,
        "s_z": nu - nd, "n_up_n_down": nu @ nd,
        "pair": ad @ au, "pair_dag": cu @ cd,
        "a_up": au, "a_down": ad, "a_up_dag": cu, "a_down_dag": cd,
        "Phi": phi_op, "Psi": psi_op, "Phi2": phi_op @ phi_op, "Psi2": psi_op @ psi_op,
    }


def one_site_hamiltonian(c: complex, p: ModelParams) -> np.ndarray:
    o = one_site_operators()
    return (-p.mu * o["n"] - p.h * o["s_z"] + 2.0 * p.lam * o["n_up_n_down"]
            - p.gamma * (c * o["pair_dag"] + np.conj(c) * o["pair"]))


def one_site_state(c: complex, p: ModelParams) -> OneSiteState:
    """Gibbs state of the one-site mean-field Hamiltonian with pairing field c."""
    H = one_site_hamiltonian(c, p)
    e, v = np.linalg.eigh(H)
    wts = np.exp(-p.beta * (e - e.min()))
    wts /= wts.sum()
    rho = (v * wts) @ v.conj().T
    ex = {k: complex(np.trace(rho @ op)) for k, op in one_site_operators().items()}
    return OneSiteState(complex(c), rho, ex)


def one_site_pressure(c: complex, p: ModelParams) -> float:
    """ln Tr exp(-beta H_1(c)) / beta."""
    e = np.linalg.eigvalsh(one_site_hamiltonian(c, p))
    return float(logsumexp(-p.beta * e)) / p.beta


def _kubo_mori_variance(H: np.ndarray, A: np.ndarray, beta: float) -> float:
    # int_0^1 Tr(rho^s dA rho^(1-s) dA) ds in the eigenbasis of H
    e, v = np.linalg.eigh(H)
    lw = -beta * e
    lw -= logsumexp(lw)
    pw = np.exp(lw)
    a = v.conj().T @ A @ v
    a = a - np.trace(np.diag(pw) @ a) * np.eye(len(e))
    li, lj = np.meshgrid(lw, lw, indexing="ij")
    pi, pj = np.exp(li), np.exp(lj)
    diff = li - lj
    with np.errstate(invalid="ignore", divide="ignore"):
        kern = np.where(np.abs(diff) > 1e-12, (pi - pj) / diff, pi)
    return float((np.abs(a) ** 2 * kern).sum().real)


def cooper_field_fluctuation(c: complex, p: ModelParams,
                             kind: str = "plain") -> tuple[float, float]:
    """Variances of the Cooper fields Phi, Psi in the one-site state at c.

    ``plain`` is zeta_c(X^2) - zeta_c(X)^2. ``kubo_mori`` is the Duhamel
    variance, which equals beta^-1 gamma^-2 times the curvature of the one-site
    pressure along the corresponding direction in c.
    """
    if kind == "plain":
        s = one_site_state(c, p)
        return (s["Phi2"] - s["Phi"] ** 2).real, (s["Psi2"] - s["Psi"] ** 2).real
    if kind == "kubo_mori":
        H = one_site_hamiltonian(c, p)
        o = one_site_operators()
        return (_kubo_mori_variance(H, o["Phi"], p.beta),
                _kubo_mori_variance(H, o["Psi"], p.beta))
    raise ValueError(f"unknown kind {kind!r}")


def variational_lower_bound(p: ModelParams, r: float) -> float:
    """-gamma r + p(c) at |c|^2 = r: bounds every p_N from below."""
    return -p.gamma * r + one_site_pressure(math.sqrt(r), p)
