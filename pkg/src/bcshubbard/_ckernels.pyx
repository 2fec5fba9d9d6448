# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled twin of ``_pykernels``; same algorithms, C doubles."""

from libc.math cimport exp, log, log1p, sqrt, tanh, sinh, fabs, fmin, INFINITY, isfinite

from .errors import BracketFailure

cdef double LN2 = log(2.0)
cdef double SERIES_CUT = 1e-6
cdef double BISECT_WIDTH = 1e-15
cdef int N_NEWTON = 3


cpdef double lncosh(double x) nogil:
    x = fabs(x)
    return x + log1p(exp(-2.0 * x)) - LN2


cpdef double lnsinhc(double x) nogil:
    if x < SERIES_CUT:
        return x * x / 6.0
    if x < 20.0:
        return log(sinh(x) / x)
    return x + log1p(-exp(-2.0 * x)) - LN2 - log(x)


cdef inline double tanhc(double x) nogil:
    if x < SERIES_CUT:
        return 1.0 - x * x / 3.0
    return tanh(x) / x


cdef inline double logaddexp(double a, double b) nogil:
    cdef double t
    if a < b:
        t = a
        a = b
        b = t
    if b == -INFINITY:
        return a
    return a + log1p(exp(b - a))


cpdef double gap_energy(double r, double mu, double lam, double gamma) nogil:
    cdef double x0 = mu - lam
    return sqrt(x0 * x0 + gamma * gamma * r)


cpdef double free_energy(double r, double beta, double mu, double lam,
                         double gamma, double h) nogil:
    cdef double g = gap_energy(r, mu, lam, gamma)
    return -gamma * r + logaddexp(lncosh(beta * h), -lam * beta + lncosh(beta * g)) / beta


cpdef double ln_denominator(double g, double beta, double lam, double h) nogil:
    return logaddexp(lam * beta + lncosh(beta * h), lncosh(beta * g))


cpdef double free_energy_slope(double r, double beta, double mu, double lam,
                               double gamma, double h) nogil:
    cdef double g = gap_energy(r, mu, lam, gamma)
    cdef double q = exp(log(beta) + lnsinhc(beta * g) - ln_denominator(g, beta, lam, h))
    return gamma * (0.5 * gamma * q - 1.0)


cpdef double gap_residual(double r, double beta, double mu, double lam,
                          double gamma, double h) nogil:
    cdef double g = gap_energy(r, mu, lam, gamma)
    cdef double k = exp(fmin(lam * beta + lncosh(beta * h) - lncosh(beta * g), 700.0))
    return tanh(beta * g) - (2.0 * g / gamma) * (1.0 + k)


cpdef double h1_scaled(double x, double beta, double lam, double gamma, double h) nogil:
    cdef double bx = beta * x
    cdef double k = exp(fmin(lam * beta + lncosh(beta * h) - lncosh(bx), 700.0))
    cdef double e, a
    if bx < 1.0:
        return 0.5 * gamma * beta * tanhc(bx) - k - 1.0
    e = exp(-2.0 * bx)
    a = 0.5 * gamma / x
    return (a - 1.0) - a * 2.0 * e / (1.0 + e) - k


cdef double _h1_scaled_prime(double x, double beta, double lam, double gamma,
                             double h) nogil:
    cdef double bx = beta * x
    cdef double t = tanh(bx)
    cdef double k = exp(fmin(lam * beta + lncosh(beta * h) - lncosh(bx), 700.0))
    return 0.5 * gamma * (beta * (1.0 - t * t) / x - t / (x * x)) + beta * t * k


cdef inline double _cfun2(double y) nogil:
    cdef double y2
    if y < 1e-2:
        y2 = y * y
        return 1.0 / 3.0 - y2 / 45.0 + 2.0 * y2 * y2 / 945.0
    return (y / tanh(y) - 1.0) / (y * y)


cpdef double h1_turning_point(double beta, double gamma) nogil:
    cdef double k2, lo, hi, mid
    cdef int i
    if beta * gamma <= 6.0:
        return 0.0
    k2 = 2.0 / (beta * gamma)
    lo = 0.0
    hi = 1.0 / k2
    for i in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _cfun2(mid) > k2:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / beta


cdef double _root(double lo, double hi, double slo, double beta, double lam,
                  double gamma, double h) nogil:
    cdef double mid, s, x, a, b, dp, xn
    cdef int i
    for i in range(400):
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
    a = lo
    b = hi
    for i in range(N_NEWTON):
        s = h1_scaled(x, beta, lam, gamma, h)
        if s == 0.0 or x <= 0.0:
            break
        dp = _h1_scaled_prime(x, beta, lam, gamma, h)
        if dp == 0.0 or not isfinite(dp):
            break
        xn = x - s / dp
        if not (a <= xn <= b):
            break
        if fabs(h1_scaled(xn, beta, lam, gamma, h)) >= fabs(s):
            break
        x = xn
    return x


def stationary_points(double beta, double mu, double lam, double gamma, double h):
    cdef double x0 = fabs(mu - lam)
    cdef double xh = 0.5 * gamma
    cdef double s_hi, s0, xt, st, r, g2
    cdef double xs[2]
    cdef int n = 0, i
    if x0 >= xh:
        return ()
    s_hi = h1_scaled(xh, beta, lam, gamma, h)
    if s_hi > 0.0:
        raise BracketFailure(f"h1(gamma/2) = {s_hi!r} is not negative")
    s0 = h1_scaled(x0, beta, lam, gamma, h)
    xt = h1_turning_point(beta, gamma)
    if xt >= xh:
        return ()
    if xt <= x0:
        if s0 > 0.0:
            xs[n] = _root(x0, xh, s0, beta, lam, gamma, h)
            n += 1
    else:
        st = h1_scaled(xt, beta, lam, gamma, h)
        if st > 0.0:
            if s0 < 0.0:
                xs[n] = _root(x0, xt, s0, beta, lam, gamma, h)
                n += 1
            xs[n] = _root(xt, xh, st, beta, lam, gamma, h)
            n += 1
    g2 = gamma * gamma
    out = []
    for i in range(n):
        r = (xs[i] - x0) * (xs[i] + x0) / g2
        if r > 0.0:
            out.append(r)
    return tuple(out)


def solve_core(double beta, double mu, double lam, double gamma, double h,
               double tie_tol, double merge_tol):
    cdef double fmax, v
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
