"""Non-central chi-square density and CDF through nine evaluation paths.

F_{nu,lam}(x) = 1 - Q_{nu/2}(sqrt(lam), sqrt(x)).  The even-order paths
(nu = 2n) share the finite Bessel head

    H_n = 1/2 - e^{-(lam+x)/2} (I_0(z)/2 + sum_{k=1}^{n-1} (x/lam)^{k/2} I_k(z)),   z = sqrt(lam x)

and differ in how they evaluate S_0(z, omega) in F = H_n - (lam - x)/(4z) S_0.
"""

import enum
import math
import time
from dataclasses import dataclass

from . import hyper, marcum, sv
from ._jit import jit
from .base import DomainError, Ncx2Error, NonConvergenceError, resolve
from .special import geometric_tail, log_bessel_i_scaled, log_inc_gamma


class CdfMethod(str, enum.Enum):
    MARCUM_QUAD = "marcum-quad"
    MARCUM_1G1 = "marcum-1g1"
    BESSEL_SERIES = "bessel-series"
    HALF_S0 = "half-s0"
    FOX_WRIGHT = "fox-wright"
    FOX_WRIGHT_EVEN = "fox-wright-even"
    GAUSS_2G1 = "gauss-2g1"
    TEMME_SYMMETRIC = "temme-symmetric"
    DIAG_BRYCHKOV = "diag-brychkov"

    def __str__(self):
        return self.value


ALL_METHODS = tuple(CdfMethod)
EVEN_METHODS = (
    CdfMethod.BESSEL_SERIES, CdfMethod.HALF_S0, CdfMethod.FOX_WRIGHT_EVEN, CdfMethod.GAUSS_2G1,
)
INTEGER_METHODS = (CdfMethod.FOX_WRIGHT, CdfMethod.TEMME_SYMMETRIC, CdfMethod.DIAG_BRYCHKOV)


@dataclass(frozen=True)
class Ncx2Params:
    """Degrees of freedom ``nu > 0``, noncentrality ``lam >= 0``, evaluation point ``x >= 0``.

    lam = 0 is accepted and means the central distribution.
    """

    nu: float
    lam: float
    x: float

    def __post_init__(self):
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise DomainError(f"nu must be finite and > 0, got {self.nu!r}")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be finite and >= 0, got {self.lam!r}")
        if not self.x >= 0:
            raise DomainError(f"x must be >= 0, got {self.x!r}")

    @property
    def is_integer(self):
        return float(self.nu).is_integer()

    @property
    def is_even(self):
        return self.is_integer and int(self.nu) % 2 == 0


@dataclass(frozen=True)
class MethodReport:
    """One CDF evaluation with diagnostics."""

    method: CdfMethod
    value: float
    terms_or_panels: int
    converged: bool
    wall_time_ns: int
    discrepancy_vs_reference: float = math.nan


# -- kernels ------------------------------------------------------------------


@jit
def bessel_terms_sum(k_lo, k_hi, half_first, lam, x, rtol, atol, stop_early):
    """sum_{k=k_lo}^{k_hi-1} (x/lam)^{k/2} e^{-(lam+x)/2} I_k(sqrt(lam x)).

    Each term is exp(k/2 ln(x/lam) - (sqrt x - sqrt lam)^2/2 + ln[e^{-z} I_k(z)]).
    With ``stop_early`` the loop ends once three consecutive terms are
    negligible past the peak.  Returns ``(sum, terms, converged)``.
    """
    z = math.sqrt(lam * x)
    d = math.sqrt(x) - math.sqrt(lam)
    base = -0.5 * d * d
    lr = 0.5 * math.log(x / lam)
    s = 0.0
    t = 0.0
    lt = -math.inf
    small = 0
    n = 0
    for k in range(k_lo, k_hi):
        lb, _, ok, _ = log_bessel_i_scaled(float(k), z, rtol, 100000)
        if not ok:
            return s, n, False
        prev = t
        lprev = lt
        lt = k * lr + base + lb
        t = math.exp(lt)
        if half_first and k == 0:
            t *= 0.5
        s += t
        n += 1
        if stop_early:
            # compare logs: leading terms may underflow to 0 well before the peak
            if t <= rtol * s + atol and lt < lprev:
                small += 1
                if small >= 3 and geometric_tail(t, prev) <= rtol * s + atol:
                    return s, n, True
            else:
                small = 0
    return s, n, not stop_early


def _bessel_head(n, lam, x, pol):
    """e^{-(lam+x)/2} (I_0/2 + sum_{k=1}^{n-1} (x/lam)^{k/2} I_k)."""
    s, terms, ok = bessel_terms_sum(0, n, True, lam, x, pol.rel_tol, pol.abs_tol, False)
    if not ok:
        raise NonConvergenceError(f"Bessel head sum failed at (n={n}, lam={lam}, x={x})")
    return s, terms


def _k_cap(n, lam, x):
    return n + max(200, int(10.0 * math.sqrt(lam * x) + 5.0 * abs(x - lam)))


# -- domain helpers ------------------------------------------------------------


def _need_even(nu, method):
    if not (float(nu).is_integer() and int(nu) % 2 == 0):
        raise DomainError(f"method {method} requires even nu = 2n, got nu={nu!r}")
    return int(nu) // 2


def _need_integer(nu, method):
    if not float(nu).is_integer():
        raise DomainError(f"method {method} requires integer nu = n, got nu={nu!r}")
    return int(nu)


def _check_pos(lam, x):
    if not (lam > 0 and x > 0):
        raise DomainError(f"this evaluation path requires lam > 0 and x > 0, got lam={lam!r}, x={x!r}")


# -- density -------------------------------------------------------------------


def pdf(params, policy=None):
    """Density 1/2 e^{-(x+lam)/2} (x/lam)^{(nu-2)/4} I_{nu/2-1}(sqrt(lam x)), from log space."""
    nu, lam, x = params.nu, params.lam, params.x
    if not x > 0:
        raise DomainError(f"pdf requires x > 0, got {x!r}")
    if lam == 0:
        h = 0.5 * nu
        return math.exp((h - 1.0) * math.log(x) - 0.5 * x - h * math.log(2.0) - math.lgamma(h))
    pol = resolve(policy)
    z = math.sqrt(lam * x)
    lb, _, ok, _ = log_bessel_i_scaled(0.5 * nu - 1.0, z, pol.rel_tol, pol.max_terms)
    if not ok:
        raise NonConvergenceError(f"pdf Bessel factor failed at {params}")
    d = math.sqrt(x) - math.sqrt(lam)
    return 0.5 * math.exp(0.25 * (nu - 2.0) * math.log(x / lam) - 0.5 * d * d + lb)


# -- CDF paths (each returns (value, terms_or_panels)) --------------------------


def cdf_central_limit(nu, x, policy=None):
    """lam -> 0 limit: P(nu/2, x/2)."""
    if not (nu > 0 and x >= 0):
        raise DomainError("cdf_central_limit needs nu > 0 and x >= 0")
    if x == 0:
        return 0.0
    pol = resolve(policy)
    lp, _, _, ok = log_inc_gamma(0.5 * nu, 0.5 * x, pol.rel_tol, pol.max_terms)
    if not ok:
        raise NonConvergenceError(f"central limit P({nu / 2}, {x / 2}) did not converge")
    return math.exp(lp)


def _marcum_quad(nu, lam, x, pol):
    args = marcum.MarcumArgs(0.5 * nu, math.sqrt(lam), math.sqrt(x))
    p, _, panels = marcum.marcum_pq_quadrature(args, pol)
    return p, panels


def _marcum_1g1(nu, lam, x, pol):
    p, _, terms = marcum.marcum_pq_via_1G1(0.5 * nu, 0.5 * lam, 0.5 * x, pol)
    return p, terms


def cdf_marcum(params, path="gamma_series", policy=None):
    """1 - Q_{nu/2}(sqrt(lam), sqrt(x)) by ``path`` ``quadrature`` or ``gamma_series``."""
    if path not in ("quadrature", "gamma_series"):
        raise DomainError(f"unknown Marcum path {path!r}")
    method = CdfMethod.MARCUM_QUAD if path == "quadrature" else CdfMethod.MARCUM_1G1
    return cdf(params, method, policy).value


def _bessel_series(nu, lam, x, pol):
    n = _need_even(nu, CdfMethod.BESSEL_SERIES)
    cap = _k_cap(n, lam, x)
    s, terms, ok = bessel_terms_sum(n, cap + 1, False, lam, x, pol.rel_tol, pol.abs_tol, True)
    if not ok:
        raise NonConvergenceError(
            f"Bessel tail series not settled by k = {cap} at (nu={nu}, lam={lam}, x={x})", result=s
        )
    return s, terms


def cdf_bessel_series(n, lam, x, policy=None):
    """F_{2n} = e^{-(lam+x)/2} sum_{k>=n} (x/lam)^{k/2} I_k(sqrt(lam x))."""
    return cdf(Ncx2Params(2 * n, lam, x), CdfMethod.BESSEL_SERIES, policy).value


def cdf_bessel_condensed(n, lam, x, policy=None):
    """Cross-check form: full sum over k >= 0 minus the first n terms."""
    _check_pos(lam, x)
    pol = resolve(policy)
    cap = _k_cap(n, lam, x)
    full, _, ok = bessel_terms_sum(0, cap + 1, False, lam, x, pol.rel_tol, pol.abs_tol, True)
    if not ok:
        raise NonConvergenceError(f"condensed Bessel sum not settled at (n={n}, lam={lam}, x={x})")
    head, _, _ = bessel_terms_sum(0, n, False, lam, x, pol.rel_tol, pol.abs_tol, False)
    return full - head


def _s0_coefficient(lam, x):
    # signed: the |lam - x| printed with the identity is only right for x < lam
    return (lam - x) / (4.0 * math.sqrt(lam * x))


def _half_s0(nu, lam, x, pol):
    n = _need_even(nu, CdfMethod.HALF_S0)
    head, terms = _bessel_head(n, lam, x, pol)
    if x == lam:
        return 0.5 - head, terms
    s0, panels = sv.s_integral_eval(sv.SvArgs(0.0, lam, x), pol)
    return 0.5 - head - _s0_coefficient(lam, x) * s0, terms + panels


def cdf_half_s0(n, lam, x, policy=None):
    """F = H_n - (lam - x)/(4 sqrt(lam x)) S_0(sqrt(lam x), omega), S_0 by quadrature."""
    return cdf(Ncx2Params(2 * n, lam, x), CdfMethod.HALF_S0, policy).value


def _fox_wright(nu, lam, x, pol, allow_real_nu=False):
    if not allow_real_nu:
        _need_integer(nu, CdfMethod.FOX_WRIGHT)
    s = x + lam
    z = lam * x / (s * s)
    h = 0.5 * nu
    p1 = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(h, 2.0, 0.5 * s, h, 1.0), z, pol)
    p2 = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(h + 1.0, 2.0, 0.5 * s, h + 1.0, 1.0), z, pol)
    pre = math.exp(h * math.log(x / s))
    return pre * (p1.value - lam / s * p2.value), p1.terms_used + p2.terms_used


def cdf_foxwright(n, lam, x, policy=None, allow_real_nu=False):
    """F = (x/(x+lam))^{n/2} {Psi_a - lam/(x+lam) Psi_b} with two incomplete Fox-Wright series.

    ``allow_real_nu`` evaluates the same expression for non-integer ``n``
    (experimental; the identity is only established for integers).
    """
    pol = resolve(policy)
    _check_pos(lam, x)
    return _fox_wright(float(n), float(lam), float(x), pol, allow_real_nu)[0]


def _fox_wright_even(nu, lam, x, pol, form="first"):
    n = _need_even(nu, CdfMethod.FOX_WRIGHT_EVEN)
    if form not in ("first", "second"):
        raise DomainError(f"fox-wright-even form must be 'first' or 'second', got {form!r}")
    head, terms = _bessel_head(n, lam, x, pol)
    if x == lam:
        return 0.5 - head, terms
    s = x + lam
    zz = lam * x / (s * s)
    if form == "first":
        r = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(1.0, 2.0, 0.5 * s, 1.0, 1.0), zz, pol)
        return 0.5 - head - (lam - x) / (2.0 * s) * r.value, terms + r.terms_used
    # S_0(p, b) with p = (x+lam)/(2 sqrt(lam x)), b = sqrt(lam x), via the (2,2);(2,1) series
    b = math.sqrt(lam * x)
    p = s / (2.0 * b)
    r = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(2.0, 2.0, 0.5 * s, 2.0, 1.0), zz, pol)
    d = math.sqrt(x) - math.sqrt(lam)
    e_i0 = math.exp(-0.5 * d * d + log_bessel_i_scaled(0.0, b, pol.rel_tol, pol.max_terms)[0])
    s0 = r.value / (2.0 * p ** 3) - e_i0 / p + 1.0 / p
    return 0.5 - head - _s0_coefficient(lam, x) * s0, terms + r.terms_used


def cdf_foxwright_even(n, lam, x, form="first", policy=None):
    """F_{2n} = H_n - (lam - x)/(4 sqrt(lam x)) S_0 with S_0 from a Fox-Wright series.

    S_0 = S_0(p, b) at p = (x+lam)/(2 sqrt(lam x)), b = sqrt(lam x), so both
    series have split point (x+lam)/2 and argument lam x/(x+lam)^2 <= 1/4.
    """
    pol = resolve(policy)
    _check_pos(lam, x)
    return _fox_wright_even(2.0 * n, float(lam), float(x), pol, form)[0]


def _gauss_2g1(nu, lam, x, pol):
    n = _need_even(nu, CdfMethod.GAUSS_2G1)
    head, terms = _bessel_head(n, lam, x, pol)
    if x == lam:
        return 0.5 - head, terms
    r2 = math.sqrt(x) + math.sqrt(lam)
    r2 *= r2
    zz = 4.0 * math.sqrt(lam * x) / r2
    g = hyper.inc_2gamma1(1.0, 0.5 * r2, 0.5, 1.0, zz, pol)
    return 0.5 - head - (lam - x) / (2.0 * r2) * g.value, terms + g.terms_used


def cdf_2g1(n, lam, x, policy=None):
    """F_{2n} = H_n - (lam - x)/(2 (sqrt x + sqrt lam)^2) 2gamma1[(1, (sqrt x+sqrt lam)^2/2), 1/2; 1 | z]."""
    pol = resolve(policy)
    _check_pos(lam, x)
    return _gauss_2g1(2.0 * n, float(lam), float(x), pol)[0]


def _temme_diag_2f2(n, lam, pol):
    """x = lam branch: two 2F2 at -2 lam (n >= 2)."""
    f1 = hyper.hyp2f2(0.5 * (n - 1), 0.5 * n, 0.5 * n + 1.0, n - 1.0, -2.0 * lam, pol)
    f2 = hyper.hyp2f2(0.5 * (n + 1), 0.5 * n + 1.0, 0.5 * n + 2.0, n + 1.0, -2.0 * lam, pol)
    pre = math.exp(0.5 * n * math.log(0.5 * lam) - math.lgamma(0.5 * n + 1.0))
    return pre * (f1.value - lam / (n + 2.0) * f2.value), f1.terms_used + f2.terms_used


def _temme(nu, lam, x, pol):
    n = _need_integer(nu, CdfMethod.TEMME_SYMMETRIC)
    if x == lam:
        if n == 1:
            # lower parameter n - 1 = 0 is a pole of the 2F2 form
            return _diag(nu, lam, x, pol)
        return _temme_diag_2f2(n, lam, pol)
    a, pa = sv.s_integral_eval(sv.SvArgs(0.5 * n - 1.0, lam, x), pol)
    b, pb = sv.s_integral_eval(sv.SvArgs(0.5 * n, lam, x), pol)
    pre = 0.5 * math.exp(0.25 * n * math.log(x / lam))
    return pre * (a - math.sqrt(lam / x) * b), pa + pb


def cdf_temme(n, lam, x, policy=None):
    """Symmetric Temme form 1/2 (x/lam)^{n/4} {S_{n/2-1} - sqrt(lam/x) S_{n/2}}; 2F2 form at x = lam."""
    return cdf(Ncx2Params(n, lam, x), CdfMethod.TEMME_SYMMETRIC, policy).value


def _diag(nu, lam, x, pol):
    n = _need_integer(nu, CdfMethod.DIAG_BRYCHKOV)
    if x != lam:
        raise DomainError(f"method {CdfMethod.DIAG_BRYCHKOV} requires x = lambda, got x={x!r}, lambda={lam!r}")
    a = math.sqrt(lam)
    if n % 2 == 0:
        p, _ = marcum.diag_int_parts(n // 2 - 1, a, pol)
    else:
        p, _ = marcum.diag_halfint_parts(n // 2, a, pol)
    return p, n // 2 + 1


def cdf_diag(nu, lam, policy=None):
    """F_{nu,lam}(lam) from the diagonal Marcum closed forms (integer nu)."""
    return cdf(Ncx2Params(nu, lam, lam), CdfMethod.DIAG_BRYCHKOV, policy).value


_DISPATCH = {
    CdfMethod.MARCUM_QUAD: _marcum_quad,
    CdfMethod.MARCUM_1G1: _marcum_1g1,
    CdfMethod.BESSEL_SERIES: _bessel_series,
    CdfMethod.HALF_S0: _half_s0,
    CdfMethod.FOX_WRIGHT: _fox_wright,
    CdfMethod.FOX_WRIGHT_EVEN: _fox_wright_even,
    CdfMethod.GAUSS_2G1: _gauss_2g1,
    CdfMethod.TEMME_SYMMETRIC: _temme,
    CdfMethod.DIAG_BRYCHKOV: _diag,
}


def domain_error(method, params):
    """The reason ``method`` cannot evaluate ``params``, or None when it can."""
    method = CdfMethod(method)
    nu = params.nu
    if method in EVEN_METHODS and not params.is_even:
        return f"method {method} requires even nu = 2n, got nu={nu!r}"
    if method in INTEGER_METHODS and not params.is_integer:
        return f"method {method} requires integer nu = n, got nu={nu!r}"
    if method is CdfMethod.DIAG_BRYCHKOV and params.x != params.lam:
        return f"method {method} requires x = lambda, got x={params.x!r}, lambda={params.lam!r}"
    return None


def applicable_methods(params):
    return [m for m in ALL_METHODS if domain_error(m, params) is None]


def auto_method(params):
    """General nu: marcum-1g1; even nu: bessel-series for x <= lam, half-s0 above; x = lam with integer nu: diag."""
    if params.is_integer and params.x == params.lam:
        return CdfMethod.DIAG_BRYCHKOV
    if params.is_even:
        return CdfMethod.BESSEL_SERIES if params.x <= params.lam else CdfMethod.HALF_S0
    return CdfMethod.MARCUM_1G1


def cdf(params, method="auto", policy=None, reference=None):
    """Evaluate F_{nu,lam}(x) by ``method`` (a :class:`CdfMethod`, its name, or ``"auto"``).

    Returns a :class:`MethodReport`.  lam = 0 goes to the central limit and
    x = 0 returns 0 for every method, after the method's domain is checked.
    ``reference`` fills ``discrepancy_vs_reference`` with |value - reference|.
    """
    pol = resolve(policy)
    if method == "auto" or method is None:
        method = auto_method(params)
    try:
        method = CdfMethod(method)
    except ValueError:
        raise DomainError(f"unknown method {method!r}; choose from {[m.value for m in ALL_METHODS]}") from None
    reason = domain_error(method, params)
    if reason:
        raise DomainError(reason)
    t0 = time.perf_counter_ns()
    if params.x == 0:
        value, count = 0.0, 0
    elif params.lam == 0:
        value, count = cdf_central_limit(params.nu, params.x, pol), 1
    elif math.isinf(params.x):
        value, count = 1.0, 0
    else:
        value, count = _DISPATCH[method](float(params.nu), float(params.lam), float(params.x), pol)
    value = min(1.0, max(0.0, value))
    elapsed = time.perf_counter_ns() - t0
    delta = abs(value - reference) if reference is not None else math.nan
    return MethodReport(method, value, int(count), True, elapsed, delta)


def cdf_value(nu, lam, x, method="auto", policy=None):
    """Shorthand: the CDF value only."""
    return cdf(Ncx2Params(nu, lam, x), method, policy).value


__all__ = [
    "ALL_METHODS", "CdfMethod", "MethodReport", "Ncx2Error", "Ncx2Params", "applicable_methods",
    "auto_method", "cdf", "cdf_2g1", "cdf_bessel_condensed", "cdf_bessel_series", "cdf_central_limit",
    "cdf_diag", "cdf_foxwright", "cdf_foxwright_even", "cdf_half_s0", "cdf_marcum", "cdf_temme",
    "cdf_value", "domain_error", "pdf",
]
