"""Generalized Marcum Q-function Q_mu(a, b).

Four routes: direct quadrature of the defining integral, the Poisson-gamma
series e^-a 1Gamma1[[M, x]; M | a] (with M = mu, a -> a^2/2, x -> b^2/2), its
2Gamma1 confluence approximation, and the closed forms on the diagonal a = b
for integer and half-integer order.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import hyper
from .base import DomainError, QuadratureError, resolve
from .quadrature import MARCUM, integrate
from .special import bessel_i_scaled, erfc

QUAD_RTOL = 1e-13
CUTOFF = 40.0  # e^{-40^2/2} is far below binary64 underflow
MAX_HALF_ARG = 700.0  # e^{a} in the 1Gamma1 route must stay finite


@dataclass(frozen=True)
class MarcumArgs:
    """Arguments of Q_mu(a, b): order ``mu > 0``, noncentrality ``a``, threshold ``b``."""

    mu: float
    a: float
    b: float

    def __post_init__(self):
        if not self.mu > 0 or not math.isfinite(self.mu):
            raise DomainError(f"Marcum order must be finite and > 0, got {self.mu!r}")
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"Marcum argument {name} must be finite and >= 0, got {v!r}")


def _quad(args, lo, hi, pol, n_init):
    p = np.array([args.mu, args.a])
    v, err, panels, ok = integrate(
        MARCUM, p, lo, hi, pol.abs_tol, max(QUAD_RTOL, pol.rel_tol), 2000, n_init,
        pol.rel_tol, pol.max_terms,
    )
    if not ok:
        raise QuadratureError(
            f"Marcum quadrature on [{lo}, {hi}] for {args} stalled after {panels} panels "
            f"(error estimate {err:.3g})",
            result=v,
        )
    return v, panels


def cutoff(args):
    """Upper integration limit; the integrand mass beyond it is below binary64 resolution.

    The t^mu factor moves the bulk of the integrand out to about sqrt(2 mu) when
    ``a`` is small, so that point is included alongside ``max(a, b)``.
    """
    return max(args.b, args.a, math.sqrt(2.0 * args.mu)) + CUTOFF


def marcum_pq_quadrature(args, policy=None):
    """``(P, Q, panels)`` with P = 1 - Q, each from its own integral when it is the smaller one."""
    if not args.a > 0:
        raise DomainError("marcum quadrature needs a > 0 (use marcum_q_via_1G1 at a = 0)")
    pol = resolve(policy)
    upper, n_up = _quad(args, args.b, cutoff(args), pol, 8)
    if upper <= 0.5:
        return 1.0 - upper, upper, n_up
    if args.b == 0.0:
        return 0.0, 1.0, n_up
    lower, n_lo = _quad(args, 0.0, args.b, pol, 4)
    return lower, 1.0 - lower, n_up + n_lo


def marcum_q_quadrature(args, policy=None):
    """Q_mu(a, b) = a^(1-mu) int_b^inf t^mu e^{-(t^2+a^2)/2} I_{mu-1}(a t) dt.

    The integrand is evaluated as t^mu e^{-(t-a)^2/2} [e^{-at} I_{mu-1}(at)] / a^(mu-1)
    in log space, so nothing overflows.
    """
    return marcum_pq_quadrature(args, policy)[1]


def _check_1g1(M, a_half, x_half):
    M, a_half, x_half = float(M), float(a_half), float(x_half)
    if not M > 0:
        raise DomainError(f"Marcum order M must be > 0, got {M!r}")
    if not (a_half >= 0 and x_half >= 0):
        raise DomainError("Marcum half-arguments must be >= 0")
    if a_half > MAX_HALF_ARG:
        raise DomainError(f"a_half={a_half} > {MAX_HALF_ARG}: e^a overflows in the 1Gamma1 route")
    return M, a_half, x_half


def marcum_pq_via_1G1(M, a_half, x_half, policy=None):
    """``(P, Q, terms)`` for Q_M(sqrt(2a), sqrt(2x)) from the incomplete Kummer series.

    The series for the smaller side is summed (lower 1gamma1 when x lies
    below the Poisson-gamma mean M + a) and the other side is its complement.
    """
    M, a_half, x_half = _check_1g1(M, a_half, x_half)
    scale = math.exp(-a_half)
    if x_half < M + a_half:
        r = hyper.inc_1gamma1(M, x_half, M, a_half, policy)
        p = min(1.0, scale * r.value)
        return p, 1.0 - p, r.terms_used
    r = hyper.inc_1Gamma1(M, x_half, M, a_half, policy)
    q = min(1.0, scale * r.value)
    return 1.0 - q, q, r.terms_used


def marcum_q_via_1G1(M, a_half, x_half, policy=None):
    """Q_M(sqrt(2a), sqrt(2x)) = e^{-a} 1Gamma1[[M, x]; M | a]."""
    return marcum_pq_via_1G1(M, a_half, x_half, policy)[1]


def marcum_q_confluence(M, a_half, x_half, b, policy=None):
    """e^{-a} 2Gamma1[[M, x], b; M | a/b]; tends to the 1Gamma1 route with error O(1/b)."""
    M, a_half, x_half = _check_1g1(M, a_half, x_half)
    if not b > 0:
        raise DomainError(f"confluence parameter b must be > 0, got {b!r}")
    r = hyper.inc_2Gamma1(M, x_half, b, M, a_half / b, policy)
    return math.exp(-a_half) * r.value


def _check_diag(n, a):
    if int(n) != n or n < 0:
        raise DomainError(f"diagonal order index must be an integer >= 0, got {n!r}")
    if not a > 0 or not math.isfinite(a):
        raise DomainError(f"diagonal argument must be finite and > 0, got {a!r}")
    return int(n), float(a)


def diag_int_parts(n, a, policy=None):
    """``(P, Q)`` at order n+1 on the diagonal, each side assembled without subtraction from 1."""
    n, a = _check_diag(n, a)
    z = a * a
    s = 0.5 * bessel_i_scaled(0, z, policy).value
    for k in range(1, n + 1):
        s += bessel_i_scaled(k, z, policy).value
    return 0.5 - s, 0.5 + s


def marcum_q_diag_int(n, a, policy=None):
    """Q_{n+1}(a, a) = (1 + e^{-a^2} I_0(a^2))/2 + e^{-a^2} sum_{k=1}^n I_k(a^2)."""
    return diag_int_parts(n, a, policy)[1]


def diag_halfint_parts(n, a, policy=None):
    """``(P, Q)`` at order n+1/2 on the diagonal."""
    n, a = _check_diag(n, a)
    z = a * a
    s = 0.5 * erfc(math.sqrt(2.0) * a)
    for k in range(1, n + 1):
        s += bessel_i_scaled(k - 0.5, z, policy).value
    return 0.5 - s, 0.5 + s


def marcum_q_diag_halfint(n, a, policy=None):
    """Q_{n+1/2}(a, a) = (1 + erfc(sqrt(2) a))/2 + e^{-a^2} sum_{k=1}^n I_{k-1/2}(a^2)."""
    return diag_halfint_parts(n, a, policy)[1]
