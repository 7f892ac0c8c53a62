"""Scalar special functions: log-gamma, incomplete gamma, scaled Bessel I, erfc.

Every kernel (``log_*`` functions without domain checks) is numba-compatible
and returns plain floats/tuples; the public wrappers validate arguments and
raise :class:`~ncx2cdf.base.DomainError` or
:class:`~ncx2cdf.base.NonConvergenceError`.
"""

import math

from ._jit import jit
from .base import DomainError, resolve, series_result

LOG_GAMMA_MAX = 171.6  # Gamma(a) overflows binary64 beyond this


@jit
def geometric_tail(term, prev):
    """Bound the remaining sum assuming |term/prev| keeps shrinking geometrically."""
    a = abs(term)
    if a == 0.0:
        return 0.0
    p = abs(prev)
    if p == 0.0 or not math.isfinite(p):
        return math.inf
    r = a / p
    if r >= 1.0:
        return math.inf
    return a * r / (1.0 - r)


@jit
def log_inc_gamma(a, x, rtol, max_terms):
    """Logs of the regularized incomplete gamma pair.

    Returns ``(log P(a, x), log Q(a, x), iterations, converged)``.  Power series
    for ``x < a + 1``, Lentz continued fraction for the complement otherwise.
    """
    if x == 0.0:
        return -math.inf, 0.0, 0, True
    log_pre = a * math.log(x) - x - math.lgamma(a)
    tiny = 1e-300
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        s = term
        for n in range(1, max_terms + 1):
            ap += 1.0
            term *= x / ap
            s += term
            if term <= rtol * s:
                r = x / (ap + 1.0)
                if term * r / (1.0 - r) <= rtol * s:
                    logp = log_pre + math.log(s)
                    p = math.exp(logp)
                    logq = math.log1p(-p) if p < 1.0 else -math.inf
                    return logp, logq, n, True
        logp = log_pre + math.log(s)
        p = math.exp(logp)
        return logp, math.log1p(-min(p, 1.0)), max_terms, False
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_terms + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= rtol:
            logq = log_pre + math.log(h)
            q = math.exp(logq)
            logp = math.log1p(-q) if q < 1.0 else -math.inf
            return logp, logq, i, True
    logq = log_pre + math.log(h)
    return math.log1p(-min(math.exp(logq), 1.0)), logq, max_terms, False


@jit
def reg_gamma_pq(a, x, rtol, max_terms):
    """(P, Q, converged) without the logs."""
    lp, lq, _, ok = log_inc_gamma(a, x, rtol, max_terms)
    return math.exp(lp), math.exp(lq), ok


@jit
def log_bessel_i_scaled(nu, z, rtol, max_terms):
    """log(e^-z I_nu(z)) from the power series, summed outward from its peak term.

    Returns ``(log value, terms, converged, relative tail)``.  Valid for
    ``nu > -1`` and ``z >= 0``; terms are ratios to the peak term so neither the
    exponential scale nor the factorials can overflow.
    """
    if z == 0.0:
        if nu == 0.0:
            return 0.0, 1, True, 0.0
        if nu > 0.0:
            return -math.inf, 1, True, 0.0
        return math.inf, 1, True, 0.0
    h = 0.5 * z
    q = h * h
    kp = 0.5 * (-nu + math.sqrt(nu * nu + z * z)) - 1.0
    k0 = int(kp) if kp > 0.0 else 0
    logt0 = (2.0 * k0 + nu) * math.log(h) - math.lgamma(nu + k0 + 1.0) - math.lgamma(k0 + 1.0) - z
    s = 1.0
    t = 1.0
    terms = 1
    for k in range(k0, 0, -1):
        r = k * (nu + k) / q
        t *= r
        s += t
        terms += 1
        if t <= rtol * s and r < 1.0 and t * r / (1.0 - r) <= rtol * s:
            break
    t = 1.0
    ok = False
    tail = math.inf
    small = 0
    for k in range(k0, k0 + max_terms):
        t *= q / ((k + 1.0) * (nu + k + 1.0))
        s += t
        terms += 1
        if t <= rtol * s:
            small += 1
            r = q / ((k + 2.0) * (nu + k + 2.0))
            if small >= 3 and r < 1.0:
                tail = t * r / (1.0 - r)
                if tail <= rtol * s:
                    ok = True
                    break
        else:
            small = 0
    return logt0 + math.log(s), terms, ok, tail / s


# -- public API ---------------------------------------------------------------


def _check_finite(**kw):
    for name, v in kw.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


def log_gamma(a):
    """ln Gamma(a) for a > 0."""
    a = float(a)
    if not a > 0 or not math.isfinite(a):
        raise DomainError(f"log_gamma requires a > 0, got {a!r}")
    return math.lgamma(a)


def _check_gamma_args(a, x):
    a, x = float(a), float(x)
    _check_finite(a=a)
    if not a > 0:
        raise DomainError(f"incomplete gamma requires a > 0, got a={a!r}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got x={x!r}")
    return a, x


def _log_pq(a, x, policy):
    pol = resolve(policy)
    if math.isinf(x):
        return 0.0, -math.inf  # P = 1, Q = 0
    lp, lq, n, ok = log_inc_gamma(a, x, pol.rel_tol, pol.max_terms)
    series_result(math.exp(lp), n, ok, 0.0 if ok else math.inf, f"incomplete gamma ({a}, {x})")
    return lp, lq


def reg_gamma_lower(a, x, policy=None):
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    a, x = _check_gamma_args(a, x)
    return math.exp(_log_pq(a, x, policy)[0])


def reg_gamma_upper(a, x, policy=None):
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    a, x = _check_gamma_args(a, x)
    return math.exp(_log_pq(a, x, policy)[1])


def log_reg_gamma_lower(a, x, policy=None):
    a, x = _check_gamma_args(a, x)
    return _log_pq(a, x, policy)[0]


def log_reg_gamma_upper(a, x, policy=None):
    a, x = _check_gamma_args(a, x)
    return _log_pq(a, x, policy)[1]


def _complete_gamma(a):
    if a > LOG_GAMMA_MAX:
        raise OverflowError(
            f"Gamma({a}) overflows binary64; use reg_gamma_lower with log_gamma instead"
        )
    return math.gamma(a)


def gamma_lower(a, x, policy=None):
    """Lower incomplete gamma gamma(a, x) (unregularized)."""
    a, x = _check_gamma_args(a, x)
    g = _complete_gamma(a)
    return math.exp(_log_pq(a, x, policy)[0]) * g


def gamma_upper(a, x, policy=None):
    """Upper incomplete gamma Gamma(a, x) (unregularized)."""
    a, x = _check_gamma_args(a, x)
    g = _complete_gamma(a)
    return math.exp(_log_pq(a, x, policy)[1]) * g


def _check_bessel_args(nu, z):
    nu, z = float(nu), float(z)
    _check_finite(nu=nu, z=z)
    if not nu > -1.0:
        raise DomainError(f"Bessel order must satisfy nu > -1, got {nu!r}")
    if not z >= 0:
        raise DomainError(f"Bessel argument must be >= 0, got {z!r}")
    return nu, z


def log_bessel_i_scaled_value(nu, z, policy=None):
    """log(e^-z I_nu(z)) as a float; stays finite where the value itself underflows."""
    nu, z = _check_bessel_args(nu, z)
    pol = resolve(policy)
    lv, n, ok, rtail = log_bessel_i_scaled(nu, z, pol.rel_tol, pol.max_terms)
    series_result(lv, n, ok, rtail, f"bessel_i_scaled({nu}, {z})")
    return lv


def bessel_i_scaled(nu, z, policy=None):
    """e^-z I_nu(z) as a :class:`SeriesEval`.

    Orders ``-1 < nu < 0`` are accepted (the series is valid there and the
    chi-square density with one degree of freedom needs I_{-1/2}); for them the
    value is unbounded as z -> 0.
    """
    nu, z = _check_bessel_args(nu, z)
    pol = resolve(policy)
    lv, n, ok, rtail = log_bessel_i_scaled(nu, z, pol.rel_tol, pol.max_terms)
    v = math.exp(lv)
    return series_result(v, n, ok, rtail * v, f"bessel_i_scaled({nu}, {z})")


def bessel_i(nu, z, policy=None):
    """Unscaled I_nu(z); convenience wrapper restricted to z <= 600."""
    if float(z) > 600.0:
        raise DomainError("bessel_i overflows for z > 600; use bessel_i_scaled")
    return bessel_i_scaled(nu, z, policy).value * math.exp(z)


def erfc(x):
    """Complementary error function."""
    return math.erfc(float(x))


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) by direct product."""
    n_int = int(n)
    if n_int != n or n_int < 0:
        raise DomainError(f"pochhammer requires a nonnegative integer n, got {n!r}")
    a = float(a)
    p = 1.0
    for k in range(n_int):
        p *= a + k
    if math.isinf(p):
        raise OverflowError(f"({a})_{n_int} overflows binary64")
    return p
