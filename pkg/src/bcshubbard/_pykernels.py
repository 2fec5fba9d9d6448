"""Scalar kernels for f(r) and its stationary points, pure Python.

Mirrors ``_ckernels.pyx`` line for line; the extension is preferred when built.
All hyperbolic ratios go through log space so that beta ~ 1e4 is safe.
"""

import math

from .errors import BracketFailure

LN2 = math.log(2.0)
SERIES_CUT = 1e-6
BISECT_WIDTH = 1e-15
N_NEWTON = 3


def lncosh(x):
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - LN2


def lnsinhc(x):
    # ln(sinh(x)/x), x >= 0
    if x < SERIES_CUT:
        return x * x / 6.0
    if x < 20.0:
        return math.log(math.sinh(x) / x)
    return x + math.log1p(-math.exp(-2.0 * x)) - LN2 - math.log(x)


def tanhc(x):
    # tanh(x)/x, x >= 0
    if x < SERIES_CUT:
        return 1.0 - x * x / 3.0
    return math.tanh(x) / x


def logaddexp(a, b):
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def gap_energy(r, mu, lam, gamma):
    x0 = mu - lam
    return math.sqrt(x0 * x0 + gamma * gamma * r)


def free_energy(r, beta, mu, lam, gamma, h):
    g = gap_energy(r, mu, lam, gamma)
    return -gamma * r + logaddexp(lncosh(beta * h), -lam * beta + lncosh(beta * g)) / beta


def ln_denominator(g, beta, lam, h):
    # ln(e^{lam beta} cosh(beta h) + cosh(beta g))
    return logaddexp(lam * beta + lncosh(beta * h), lncosh(beta * g))


def free_energy_slope(r, beta, mu, lam, gamma, h):
    g = gap_energy(r, mu, lam, gamma)
    q = math.exp(math.log(beta) + lnsinhc(beta * g) - ln_denominator(g, beta, lam, h))
    return gamma * (0.5 * gamma * q - 1.0)


def gap_residual(r, beta, mu, lam, gamma, h):
    g = gap_energy(r, mu, lam, gamma)
    e = lam * beta + lncosh(beta * h) - lncosh(beta * g)
    k = math.exp(min(e, 700.0))
    return math.tanh(beta * g) - (2.0 * g / gamma) * (1.0 + k)


def h1_scaled(x, beta, lam, gamma, h):
    """h1(x)/cosh(beta x); same sign as df/dr at g_r = x."""
    bx = beta * x
    k = math.exp(min(lam * beta + lncosh(beta * h) - lncosh(bx), 700.0))
    if bx < 1.0:
        return 0.5 * gamma * beta * tanhc(bx) - k - 1.0
    # split off 1 - tanh so the value at x = gamma/2 is not lost to cancellation
    e = math.exp(-2.0 * bx)
    a = 0.5 * gamma / x
    return (a - 1.0) - a * 2.0 * e / (1.0 + e) - k


def _h1_scaled_prime(x, beta, lam, gamma, h):
    bx = beta * x
    t = math.tanh(bx)
    k = math.exp(min(lam * beta + lncosh(beta * h) - lncosh(bx), 700.0))
    sech2 = 1.0 - t * t
    return 0.5 * gamma * (beta * sech2 / x - t / (x * x)) + beta * t * k


def _cfun2(y):
    # (y coth y - 1)/y^2, decreasing from 1/3
    if y < 1e-2:
        y2 = y * y
        return 1.0 / 3.0 - y2 / 45.0 + 2.0 * y2 * y2 / 945.0
    return (y / math.tanh(y) - 1.0) / (y * y)


def h1_turning_point(beta, gamma):
    """Unique interior maximum of h1 when beta*gamma > 6, else 0."""
    if beta * gamma <= 6.0:
        return 0.0
    k2 = 2.0 / (beta * gamma)
    lo, hi = 0.0, 1.0 / k2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _cfun2(mid) > k2:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / beta


def _root(lo, hi, slo, beta, lam, gamma, h):
    # slo = sign value at lo; sign change certified on [lo, hi]
    for _ in range(400):
        if hi - lo <= BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = h1_scaled(mid, beta, lam, gamma, h)
        if s == 0.0:
            return mid
        if (s > 0.0) == (slo > 0.0):
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    a, b = lo, hi
    for _ in range(N_NEWTON):
        s = h1_scaled(x, beta, lam, gamma, h)
        if s == 0.0 or x <= 0.0:
            break
        dp = _h1_scaled_prime(x, beta, lam, gamma, h)
        if dp == 0.0 or not math.isfinite(dp):
            break
        xn = x - s / dp
        if not (a <= xn <= b):
            break
        if abs(h1_scaled(xn, beta, lam, gamma, h)) >= abs(s):
            break
        x = xn
    return x


def stationary_points(beta, mu, lam, gamma, h):
    """Strictly positive r with df/dr = 0, ascending (local min first if two)."""
    x0 = abs(mu - lam)
    xh = 0.5 * gamma
    if x0 >= xh:
        return ()
    s_hi = h1_scaled(xh, beta, lam, gamma, h)
    if s_hi > 0.0:
        raise BracketFailure(f"h1(gamma/2) = {s_hi!r} is not negative")
    s0 = h1_scaled(x0, beta, lam, gamma, h)
    xt = h1_turning_point(beta, gamma)
    xs = []
    if xt >= xh:
        return ()
    if xt <= x0:
        if s0 > 0.0:
            xs.append(_root(x0, xh, s0, beta, lam, gamma, h))
    else:
        st = h1_scaled(xt, beta, lam, gamma, h)
        if st > 0.0:
            if s0 < 0.0:
                xs.append(_root(x0, xt, s0, beta, lam, gamma, h))
            xs.append(_root(xt, xh, st, beta, lam, gamma, h))
    g2 = gamma * gamma
    out = []
    for x in xs:
        r = (x - x0) * (x + x0) / g2
        if r > 0.0:
            out.append(r)
    return tuple(out)


def solve_core(beta, mu, lam, gamma, h, tie_tol, merge_tol):
    """Return (maximizers ascending, f_max, stationary points).

    Only local maxima compete: r = 0 when f'(0) <= 0, and the upper
    stationary point.
    """
    sp = stationary_points(beta, mu, lam, gamma, h)
    cands = []
    if free_energy_slope(0.0, beta, mu, lam, gamma, h) <= 0.0:
        cands.append(0.0)
    if sp:
        cands.append(sp[-1])
    if not cands:
        # f'(0) > 0 by rounding only: the root sits within an ulp of x0
        cands.append(0.0)
    fv = [free_energy(r, beta, mu, lam, gamma, h) for r in cands]
    fmax = max(fv)
    maxs = []
    for r, v in zip(cands, fv):
        if fmax - v <= tie_tol:
            if maxs and r - maxs[-1] < merge_tol:
                maxs[-1] = r
            else:
                maxs.append(r)
    return tuple(maxs), fmax, sp
