"""Complete and incomplete hypergeometric series.

Complete: 0F1, 1F1, 2F1 (|z| < 1), 2F2.  Incomplete (built on the incomplete
Pochhammer symbols (a;x)_n = gamma(a+n, x)/Gamma(a), [a;x]_n = Gamma(a+n, x)/Gamma(a)):
1Gamma1, 1gamma1, 2Gamma1, 2gamma1 and the confluent incomplete Fox-Wright
function 1Psi1^(gamma).

All series share one truncation rule: stop once three consecutive terms are
below ``rel_tol * |partial sum|`` and the geometric tail bound agrees.
Incomplete-gamma factors are always evaluated directly (never by the contiguous
recurrence, which loses accuracy when iterated).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._jit import jit
from .base import DivergenceError, DomainError, NonConvergenceError, SeriesEval, resolve, series_result
from .special import geometric_tail, log_inc_gamma, pochhammer

_EPS = 2.220446049250313e-16


@jit
def pfq_series(a, b, z, rtol, atol, max_terms):
    """sum_n prod (a_i)_n / prod (b_j)_n z^n / n!.

    Returns ``(sum, terms, converged, tail, max |term|)``; the last entry
    measures cancellation.
    """
    t = 1.0
    s = 1.0
    prev = 0.0
    big = 1.0
    small = 0
    for n in range(max_terms):
        num = z
        for ai in a:
            num *= ai + n
        den = n + 1.0
        for bj in b:
            den *= bj + n
        prev = t
        t = t * num / den
        s += t
        if abs(t) > big:
            big = abs(t)
        if abs(t) <= rtol * abs(s) + atol:
            small += 1
            if small >= 3:
                tail = geometric_tail(t, prev)
                if tail <= rtol * abs(s) + atol:
                    return s, n + 2, True, tail, big
        else:
            small = 0
    return s, max_terms, False, math.inf, big


@jit
def inc_1f1(a, xs, c, z, upper, rtol, atol, max_terms):
    """sum_n R(a+n, xs) (a)_n/(c)_n z^n/n! with R = Q (upper) or P (lower)."""
    r = 1.0
    s = 0.0
    t = 0.0
    small = 0
    for n in range(max_terms):
        lp, lq, _, _ = log_inc_gamma(a + n, xs, rtol, max_terms)
        prev = t
        t = r * math.exp(lq if upper else lp)
        s += t
        if abs(t) <= rtol * abs(s) + atol:
            small += 1
            if small >= 3:
                tail = geometric_tail(t, prev)
                if tail <= rtol * abs(s) + atol:
                    return s, n + 1, True, tail
        else:
            small = 0
        r *= (a + n) * z / ((c + n) * (n + 1.0))
    return s, max_terms, False, math.inf


@jit
def inc_2f1(a, xs, b, c, z, upper, rtol, atol, max_terms):
    """sum_n R(a+n, xs) (a)_n (b)_n/(c)_n z^n/n!, R = Q (upper) or P (lower)."""
    r = 1.0
    s = 0.0
    t = 0.0
    small = 0
    for n in range(max_terms):
        lp, lq, _, _ = log_inc_gamma(a + n, xs, rtol, max_terms)
        prev = t
        t = r * math.exp(lq if upper else lp)
        s += t
        if abs(t) <= rtol * abs(s) + atol:
            small += 1
            if small >= 3:
                tail = geometric_tail(t, prev)
                if tail <= rtol * abs(s) + atol:
                    return s, n + 1, True, tail
        else:
            small = 0
        r *= (a + n) * (b + n) * z / ((c + n) * (n + 1.0))
    return s, max_terms, False, math.inf


@jit
def inc_fw11(mu, m_step, xs, b, b_step, z, rtol, atol, max_terms):
    """sum_n gamma(mu + n M, xs) / Gamma(b + n B) z^n / n!, each term in log space."""
    if xs == 0.0:
        return 0.0, 1, True, 0.0
    if z == 0.0:
        lp = log_inc_gamma(mu, xs, rtol, max_terms)[0]
        return math.exp(math.lgamma(mu) + lp - math.lgamma(b)), 1, True, 0.0
    lz = math.log(abs(z))
    neg = z < 0.0
    s = 0.0
    t = 0.0
    small = 0
    for n in range(max_terms):
        a = mu + n * m_step
        lp = log_inc_gamma(a, xs, rtol, max_terms)[0]
        lt = math.lgamma(a) + lp - math.lgamma(b + n * b_step) - math.lgamma(n + 1.0) + n * lz
        prev = t
        t = math.exp(lt)
        if neg and n % 2 == 1:
            t = -t
        s += t
        if abs(t) <= rtol * abs(s) + atol:
            small += 1
            if small >= 3:
                tail = geometric_tail(t, prev)
                if tail <= rtol * abs(s) + atol:
                    return s, n + 1, True, tail
        else:
            small = 0
    return s, max_terms, False, math.inf


# -- complete functions -------------------------------------------------------


def _check_lower(b, name):
    for bj in b:
        if bj <= 0 and float(bj).is_integer():
            raise DomainError(f"{name}: lower parameter {bj!r} is a nonpositive integer")


def _pfq(a, b, z, policy, what):
    pol = resolve(policy)
    s, n, ok, tail, big = pfq_series(
        np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64), float(z),
        pol.rel_tol, pol.abs_tol, pol.max_terms,
    )
    return s, n, ok, tail, big


def _cancellation_excessive(s, big, rtol):
    # rounding in the largest term, relative to the sum, beyond the requested tolerance
    return big * _EPS * 8.0 > rtol * abs(s)


def hyp0f1(c, z, policy=None):
    """0F1(; c; z)."""
    _check_lower([c], "hyp0f1")
    s, n, ok, tail, _ = _pfq([], [c], z, policy, "hyp0f1")
    return series_result(s, n, ok, tail, f"hyp0f1({c}, {z})")


def hyp1f1(a, b, z, policy=None):
    """Kummer 1F1(a; b; z).

    For z < 0 the Kummer transform e^z 1F1(b - a; b; -z) is used whenever its
    terms cancel less than the direct series.
    """
    _check_lower([b], "hyp1f1")
    a, b, z = float(a), float(b), float(z)
    s, n, ok, tail, big = _pfq([a], [b], z, policy, "hyp1f1")
    if z < 0:
        s2, n2, ok2, tail2, big2 = _pfq([b - a], [b], -z, policy, "hyp1f1")
        if ok2 and (not ok or big2 / max(abs(s2), 1e-300) < big / max(abs(s), 1e-300)):
            ez = math.exp(z)
            return series_result(ez * s2, n2, ok2, ez * tail2, f"hyp1f1({a}, {b}, {z})")
    return series_result(s, n, ok, tail, f"hyp1f1({a}, {b}, {z})")


def hyp2f1(a, b, c, z, policy=None):
    """Gauss 2F1(a, b; c; z) by its power series, |z| < 1 only."""
    _check_lower([c], "hyp2f1")
    if not abs(z) < 1:
        raise DivergenceError(f"hyp2f1 series needs |z| < 1, got z={z!r}")
    s, n, ok, tail, _ = _pfq([a, b], [c], z, policy, "hyp2f1")
    return series_result(s, n, ok, tail, f"hyp2f1({a}, {b}, {c}, {z})")


def _exact_pfq(a, b, z, rtol, max_terms):
    """Exact rational partial sums of a pFq series (parameters are binary rationals)."""
    fa = [Fraction(v) for v in a]
    fb = [Fraction(v) for v in b]
    fz = Fraction(z)
    frtol = Fraction(rtol)
    t = Fraction(1)
    s = Fraction(1)
    prev = t
    small = 0
    for n in range(max_terms):
        num = fz
        for ai in fa:
            num *= ai + n
        den = Fraction(n + 1)
        for bj in fb:
            den *= bj + n
        prev = t
        t = t * num / den
        s += t
        # only trust the small-term test once the terms are shrinking
        if abs(t) <= frtol * abs(s) and abs(t) <= abs(prev):
            small += 1
            if small >= 3:
                tail = geometric_tail(float(t), float(prev))
                if tail <= rtol * abs(float(s)):
                    return float(s), n + 2, True, tail
        else:
            small = 0
    return float(s), max_terms, False, math.inf


def hyp2f2(a1, a2, b1, b2, z, policy=None):
    """2F2(a1, a2; b1, b2; z).

    Large negative arguments make the alternating terms cancel catastrophically
    (|z| = 40 loses ~17 digits); when the float sum cannot meet ``rel_tol`` the
    series is re-summed in exact rational arithmetic and rounded once.
    """
    _check_lower([b1, b2], "hyp2f2")
    pol = resolve(policy)
    s, n, ok, tail, big = _pfq([a1, a2], [b1, b2], z, pol, "hyp2f2")
    if ok and _cancellation_excessive(s, big, pol.rel_tol):
        s, n, ok, tail = _exact_pfq([a1, a2], [b1, b2], float(z), pol.rel_tol, pol.max_terms)
    return series_result(s, n, ok, tail, f"hyp2f2({a1}, {a2}, {b1}, {b2}, {z})")


# -- incomplete Pochhammer symbols -------------------------------------------


def _check_pochhammer_args(a, x_split, n):
    a, x_split = float(a), float(x_split)
    if not a > 0:
        raise DomainError(f"incomplete Pochhammer requires a > 0, got {a!r}")
    if not x_split >= 0:
        raise DomainError(f"incomplete Pochhammer requires x >= 0, got {x_split!r}")
    if int(n) != n or n < 0:
        raise DomainError(f"incomplete Pochhammer requires integer n >= 0, got {n!r}")
    return a, x_split, int(n)


def _inc_pochhammer(a, x_split, n, upper, policy):
    a, x_split, n = _check_pochhammer_args(a, x_split, n)
    pol = resolve(policy)
    lp, lq, it, ok = log_inc_gamma(a + n, x_split, pol.rel_tol, pol.max_terms)
    if not ok:
        raise NonConvergenceError(f"incomplete gamma ({a + n}, {x_split}) did not converge")
    lr = lq if upper else lp
    try:
        return pochhammer(a, n) * math.exp(lr)
    except OverflowError:
        return math.exp(math.lgamma(a + n) - math.lgamma(a) + lr)


def inc_pochhammer_lower(a, x_split, n, policy=None):
    """(a; x)_n = gamma(a + n, x) / Gamma(a)."""
    return _inc_pochhammer(a, x_split, n, False, policy)


def inc_pochhammer_upper(a, x_split, n, policy=None):
    """[a; x]_n = Gamma(a + n, x) / Gamma(a)."""
    return _inc_pochhammer(a, x_split, n, True, policy)


@dataclass(frozen=True)
class IncPochhammer:
    """The pair (a; x)_n, [a; x]_n for fixed ``a`` and split point ``x``."""

    a: float
    x_split: float

    def __post_init__(self):
        _check_pochhammer_args(self.a, self.x_split, 0)

    def lower(self, n, policy=None):
        return inc_pochhammer_lower(self.a, self.x_split, n, policy)

    def upper(self, n, policy=None):
        return inc_pochhammer_upper(self.a, self.x_split, n, policy)


# -- incomplete hypergeometric functions -------------------------------------


def _check_inc_args(a, x_split, c):
    if not a > 0:
        raise DomainError(f"incomplete hypergeometric requires a > 0, got {a!r}")
    if not c > 0:
        raise DomainError(f"incomplete hypergeometric requires c > 0, got {c!r}")
    if not x_split >= 0:
        raise DomainError(f"incomplete hypergeometric requires x >= 0, got {x_split!r}")


def _inc_1(a, x_split, c, z, upper, policy, name):
    a, x_split, c, z = float(a), float(x_split), float(c), float(z)
    _check_inc_args(a, x_split, c)
    pol = resolve(policy)
    s, n, ok, tail = inc_1f1(a, x_split, c, z, upper, pol.rel_tol, pol.abs_tol, pol.max_terms)
    return series_result(s, n, ok, tail, f"{name}({a}, {x_split}, {c}, {z})")


def inc_1Gamma1(a, x_split, c, z, policy=None):
    """Upper incomplete Kummer function 1Gamma1[[a, x]; c | z] = sum [a;x]_n/(c)_n z^n/n!."""
    return _inc_1(a, x_split, c, z, True, policy, "inc_1Gamma1")


def inc_1gamma1(a, x_split, c, z, policy=None):
    """Lower incomplete Kummer function 1gamma1[(a, x); c | z] = sum (a;x)_n/(c)_n z^n/n!."""
    return _inc_1(a, x_split, c, z, False, policy, "inc_1gamma1")


def _inc_2(a, x_split, b, c, z, upper, policy, name):
    a, x_split, b, c, z = float(a), float(x_split), float(b), float(c), float(z)
    _check_inc_args(a, x_split, c)
    if not abs(z) < 1:
        raise DivergenceError(f"{name} series needs |z| < 1, got z={z!r}")
    pol = resolve(policy)
    s, n, ok, tail = inc_2f1(a, x_split, b, c, z, upper, pol.rel_tol, pol.abs_tol, pol.max_terms)
    return series_result(s, n, ok, tail, f"{name}({a}, {x_split}, {b}, {c}, {z})")


def inc_2Gamma1(a, x_split, b, c, z, policy=None):
    """Upper incomplete Gauss function 2Gamma1[[a, x], b; c | z], |z| < 1."""
    return _inc_2(a, x_split, b, c, z, True, policy, "inc_2Gamma1")


def inc_2gamma1(a, x_split, b, c, z, policy=None):
    """Lower incomplete Gauss function 2gamma1[(a, x), b; c | z], |z| < 1."""
    return _inc_2(a, x_split, b, c, z, False, policy, "inc_2gamma1")


@dataclass(frozen=True)
class IncFoxWrightParams:
    """Parameters of 1Psi1^(gamma)[(mu, M, x); (b, B) | z].

    The numerator Gamma(mu + n M) is replaced by gamma(mu + n M, x).  For a
    finite split point the terms are bounded by x^(mu+nM)/(mu+nM) / Gamma(b+nB)
    z^n / n!, so the series is entire in z; the complete-function radius
    ``nabla`` only matters as x -> infinity.
    """

    mu: float
    M: float
    x_split: float
    b: float
    B: float

    def __post_init__(self):
        for name in ("mu", "M", "b", "B"):
            if not getattr(self, name) > 0:
                raise DomainError(f"IncFoxWrightParams.{name} must be > 0, got {getattr(self, name)!r}")
        if not (self.x_split >= 0 and math.isfinite(self.x_split)):
            raise DomainError(f"IncFoxWrightParams.x_split must be finite and >= 0, got {self.x_split!r}")
        if self.delta < 0:
            raise DomainError(f"convergence constraint 1 + B - M >= 0 violated (got {self.delta})")

    @property
    def delta(self):
        return 1.0 + self.B - self.M

    @property
    def nabla(self):
        return self.B ** self.B * self.M ** (-self.M)


def inc_foxwright_1psi1(params, z, policy=None):
    """Incomplete Fox-Wright 1Psi1^(gamma) = sum gamma(mu+nM, x)/Gamma(b+nB) z^n/n!.

    Raises :class:`DivergenceError` when the terms are still growing after
    ``max_terms`` (the only way the series fails for a finite split point).
    """
    pol = resolve(policy)
    z = float(z)
    s, n, ok, tail = inc_fw11(
        params.mu, params.M, params.x_split, params.b, params.B, z,
        pol.rel_tol, pol.abs_tol, pol.max_terms,
    )
    if not ok:
        raise DivergenceError(
            f"1Psi1^(gamma) with {params} at z={z} did not settle within {pol.max_terms} terms"
        )
    return SeriesEval(s, n, ok, tail)
