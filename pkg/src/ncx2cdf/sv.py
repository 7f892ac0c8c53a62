"""The exponential-Bessel integrals S_nu and T_nu and their series forms.

    S_nu(sqrt(lam x), omega) = int_0^{sqrt(lam x)} e^{-(omega+1) t} I_nu(t) dt
    T_nu(sqrt(lam x), omega) = int_{sqrt(lam x)}^inf e^{-(omega+1) t} I_nu(t) dt

with omega = (x + lam)/(2 sqrt(lam x)) - 1 >= 0.  T_nu is obtained from the
closed form of S_nu + T_nu, never by integrating to infinity.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import hyper
from .base import DivergenceError, DomainError, QuadratureError, SeriesEval, resolve, series_result
from .quadrature import SV, SV_SQRT, integrate
from .special import bessel_i_scaled, geometric_tail, log_bessel_i_scaled

QUAD_RTOL = 1e-13


@dataclass(frozen=True)
class SvArgs:
    """Order ``nu > -1`` and the pair ``lam, x > 0`` that fix the upper limit and omega."""

    nu: float
    lam: float
    x: float

    def __post_init__(self):
        if not self.nu > -1 or not math.isfinite(self.nu):
            raise DomainError(f"S/T order must satisfy nu > -1, got {self.nu!r}")
        for name in ("lam", "x"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"S/T argument {name} must be finite and > 0, got {v!r}")

    @property
    def z(self):
        """Upper limit sqrt(lam x)."""
        return math.sqrt(self.lam * self.x)

    @property
    def omega(self):
        # (sqrt x - sqrt lam)^2 / (2 sqrt(lam x)) avoids cancellation near x = lam
        d = math.sqrt(self.x) - math.sqrt(self.lam)
        return d * d / (2.0 * self.z)


def _integrate_s(nu, omega, upper, policy):
    pol = resolve(policy)
    p = np.array([float(nu), float(omega)])
    if nu < 0:
        # t = u^2 removes the t^nu singularity at the origin
        kind, hi = SV_SQRT, math.sqrt(upper)
    else:
        kind, hi = SV, upper
    v, err, panels, ok = integrate(
        kind, p, 0.0, hi, pol.abs_tol, max(QUAD_RTOL, pol.rel_tol), 2000, 4,
        pol.rel_tol, pol.max_terms,
    )
    if not ok:
        raise QuadratureError(
            f"S integral (nu={nu}, omega={omega}, upper={upper}) stalled after {panels} panels "
            f"(error estimate {err:.3g})",
            result=v,
        )
    return v, panels


def s_integral_eval(args, policy=None):
    """``(S_nu, panels)`` by adaptive quadrature of e^{-omega t} [e^{-t} I_nu(t)]."""
    return _integrate_s(args.nu, args.omega, args.z, policy)


def s_integral(args, policy=None):
    """S_nu(sqrt(lam x), omega) by adaptive quadrature."""
    return s_integral_eval(args, policy)[0]


def s_generic(nu, p, b, policy=None):
    """int_0^b e^{-p t} I_nu(t) dt for arbitrary p > 0 (the S_0(p, b) of the Fox-Wright forms)."""
    if not (p > 0 and b >= 0):
        raise DomainError("s_generic needs p > 0 and b >= 0")
    if b == 0:
        return 0.0
    return _integrate_s(nu, p - 1.0, b, policy)[0]


def s_via_foxwright(args, policy=None):
    """S_nu from its incomplete Fox-Wright series.

    S_nu = 2 (lam x)^((nu+1)/2) / (x+lam)^(nu+1)
           * 1Psi1^(gamma)[(nu+1, 2, (x+lam)/2); (nu+1, 1) | lam x/(x+lam)^2]
    """
    s = args.x + args.lam
    fw = hyper.IncFoxWrightParams(args.nu + 1.0, 2.0, 0.5 * s, args.nu + 1.0, 1.0)
    z = args.lam * args.x / (s * s)
    r = hyper.inc_foxwright_1psi1(fw, z, policy)
    log_pre = math.log(2.0) + (args.nu + 1.0) * (math.log(args.z) - math.log(s))
    return math.exp(log_pre) * r.value


def _e_pb_i0(p, b, policy):
    # e^{-p b} I_0(b) = e^{-(p-1) b} [e^{-b} I_0(b)]
    return math.exp(-(p - 1.0) * b) * bessel_i_scaled(0, b, policy).value


def s0_closed_forms(p, b, policy=None):
    """Both Fox-Wright evaluations of S_0(p, b) = int_0^b e^{-p t} I_0(t) dt.

    first:  (1/p) 1Psi1^(gamma)[(1, 2, pb); (1, 1) | 1/(4p^2)]
    second: (1/(2p^3)) 1Psi1^(gamma)[(2, 2, pb); (2, 1) | 1/(4p^2)] - e^{-pb} I_0(b)/p + 1/p

    The +1/p in the second form is the limit a gamma(a, x) -> 1 at a = 0 that
    appears when the contiguous relation is applied to the n = 0 term.
    """
    p, b = float(p), float(b)
    if not (p > 0 and b > 0):
        raise DomainError(f"s0_closed_forms needs p, b > 0, got p={p!r}, b={b!r}")
    z = 1.0 / (4.0 * p * p)
    r1 = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(1.0, 2.0, p * b, 1.0, 1.0), z, policy)
    r2 = hyper.inc_foxwright_1psi1(hyper.IncFoxWrightParams(2.0, 2.0, p * b, 2.0, 1.0), z, policy)
    first = r1.value / p
    second = r2.value / (2.0 * p ** 3) - _e_pb_i0(p, b, policy) / p + 1.0 / p
    return first, second


def st_sum_closed(args):
    """S_nu + T_nu = (x + lam - |x - lam|)^nu / ((2 sqrt(lam x))^(nu-1) |x - lam|)."""
    d = abs(args.x - args.lam)
    if d == 0.0:
        raise DomainError("S + T closed form is singular at x = lam")
    return (args.x + args.lam - d) ** args.nu / ((2.0 * args.z) ** (args.nu - 1.0) * d)


def t_integral(args, policy=None):
    """T_nu = (S_nu + T_nu) - S_nu; finite work only."""
    return st_sum_closed(args) - s_integral(args, policy)


def lommel_y_scaled(nu, w, z, policy=None):
    """e^{-z} Y_nu(w, z) where Y_nu(w, z) = sum_k (w/z)^(nu+2k) I_{nu+2k}(z).

    The Neumann series is accepted only for w < z, the range in which the
    Agrest-Maksimov identity it serves is valid.
    """
    nu, w, z = float(nu), float(w), float(z)
    if not nu >= 0:
        raise DomainError(f"lommel_y order must be >= 0, got {nu!r}")
    if not (z > 0 and w >= 0):
        raise DomainError("lommel_y needs z > 0 and w >= 0")
    if not w < z:
        raise DivergenceError(f"lommel_y Neumann series used only for w/z < 1, got w/z={w / z!r}")
    pol = resolve(policy)
    if w == 0.0:
        v = bessel_i_scaled(0, z, pol).value if nu == 0 else 0.0
        return SeriesEval(v, 1, True, 0.0)
    lr = math.log(w / z)
    s = 0.0
    t = 0.0
    small = 0
    for k in range(pol.max_terms):
        order = nu + 2 * k
        lb, _, ok, _ = log_bessel_i_scaled(order, z, pol.rel_tol, pol.max_terms)
        if not ok:
            return series_result(s, k, False, math.inf, f"lommel_y({nu}, {w}, {z})")
        prev = t
        t = math.exp(order * lr + lb)
        s += t
        if t <= pol.rel_tol * s + pol.abs_tol:
            small += 1
            if small >= 3:
                tail = geometric_tail(t, prev)
                if tail <= pol.rel_tol * s + pol.abs_tol:
                    return SeriesEval(s, k + 1, True, tail)
        else:
            small = 0
    return series_result(s, pol.max_terms, False, math.inf, f"lommel_y({nu}, {w}, {z})")


def lommel_y(nu, w, z, policy=None):
    """Lommel function of two variables Y_nu(w, z) (unscaled; z <= 700)."""
    if float(z) > 700.0:
        raise DomainError("lommel_y overflows for z > 700; use lommel_y_scaled")
    r = lommel_y_scaled(nu, w, z, policy)
    ez = math.exp(z)
    return SeriesEval(r.value * ez, r.terms_used, r.converged, r.abs_tail_estimate * ez)


def agrest_maksimov_rhs(lam, x, policy=None):
    """Right side of the Agrest-Maksimov identity for int_0^z e^{-alpha t} I_0(t) dt.

    z = sqrt(lam x), c = sqrt(lam/x), 2 alpha = c + 1/c; valid for x < lam.
    """
    lam, x = float(lam), float(x)
    if not (0 < x < lam):
        raise DomainError(f"Agrest-Maksimov form needs 0 < x < lam, got lam={lam!r}, x={x!r}")
    z = math.sqrt(lam * x)
    a1 = float(np.sqrt(x) - np.sqrt(lam)) ** 2 / (2.0 * z)  # alpha - 1
    root = (lam - x) / (2.0 * z)  # sqrt(alpha^2 - 1)
    w = x  # z / c
    bracket = (
        bessel_i_scaled(0, z, policy).value
        + 2.0 * lommel_y_scaled(2, w, z, policy).value
        + 2.0 * lommel_y_scaled(1, w, z, policy).value
    )
    return (1.0 - math.exp(-a1 * z) * bracket) / root


def agrest_maksimov_lhs(lam, x, policy=None):
    """int_0^{sqrt(lam x)} e^{-alpha t} I_0(t) dt, i.e. S_0(sqrt(lam x), omega), by quadrature."""
    return s_integral(SvArgs(0.0, lam, x), policy)


def temme_difference(n, lam, x, policy=None):
    """S_{n/2-1} - sqrt(lam/x) S_{n/2}; nonnegative, it is 2 F (lam/x)^(n/4)."""
    a = s_integral(SvArgs(0.5 * n - 1.0, lam, x), policy)
    b = s_integral(SvArgs(0.5 * n, lam, x), policy)
    return a - math.sqrt(lam / x) * b
