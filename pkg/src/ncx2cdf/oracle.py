"""Independent reference values: quadrature of the density and Monte Carlo.

Neither route touches the package's own Bessel, gamma or quadrature kernels:
the density is evaluated with ``scipy.special.ive`` and integrated with
``scipy.integrate.quad``, and the sampler builds the chi-square variate from
its definition as a sum of squared shifted normals.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .base import DomainError, QuadratureError

QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-12


def _pdf(nu, lam, x):
    # 1/2 (x/lam)^{(nu-2)/4} e^{-(sqrt x - sqrt lam)^2/2} [e^{-z} I_{nu/2-1}(z)], z = sqrt(lam x)
    if x <= 0.0:
        return 0.0
    z = math.sqrt(lam * x)
    d = math.sqrt(x) - math.sqrt(lam)
    ive = special.ive(0.5 * nu - 1.0, z)
    if ive == 0.0:
        return 0.0
    return 0.5 * math.exp(0.25 * (nu - 2.0) * math.log(x / lam) - 0.5 * d * d + math.log(ive))


def _pdf_central(nu, x):
    if x <= 0.0:
        return 0.0
    h = 0.5 * nu
    return math.exp((h - 1.0) * math.log(x) - 0.5 * x - h * math.log(2.0) - math.lgamma(h))


def quad_cdf(nu, lam, x):
    """F_{nu,lam}(x) = int_0^x pdf, by QUADPACK.

    For nu < 2 the density behaves like x^{nu/2-1} at the origin; the
    substitution x = u^{2/nu} makes that end smooth.  The interval is split at
    the approximate mode so the peak is always resolved.
    """
    nu, lam, x = float(nu), float(lam), float(x)
    if not nu > 0:
        raise DomainError(f"quad_cdf needs nu > 0, got {nu!r}")
    if not (lam >= 0 and x >= 0):
        raise DomainError("quad_cdf needs lam >= 0 and x >= 0")
    if x == 0.0:
        return 0.0
    f = (lambda t: _pdf(nu, lam, t)) if lam > 0 else (lambda t: _pdf_central(nu, t))
    mode = max(nu + lam - 2.0, 0.0)
    width = 2.0 * math.sqrt(2.0 * (nu + 2.0 * lam))
    marks = sorted({m for m in (mode - width, mode, mode + width) if 0.0 < m < x})
    if nu < 2.0:
        k = 2.0 / nu
        g = lambda u: f(u ** k) * k * u ** (k - 1.0) if u > 0.0 else 0.0
        lo, hi = 0.0, x ** (nu / 2.0)
        marks = [m ** (nu / 2.0) for m in marks]
        h = g
    else:
        lo, hi, h = 0.0, x, f
    edges = [lo, *marks, hi]
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e, info = integrate.quad(h, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=500,
                                    full_output=True)[:3]
        if e > max(1e-12, 1e-10 * abs(v)):
            raise QuadratureError(
                f"quad_cdf panel [{a}, {b}] at (nu={nu}, lam={lam}, x={x}): error estimate {e:.3g}, "
                f"{info['last']} subintervals",
                result=v,
            )
        total += v
        err += e
    return min(1.0, total)


MU_POLICIES = ("single_component", "equal_split")


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings.

    ``mu_vector_policy`` places the noncentrality either in one mean
    (mu = (sqrt(lam), 0, ..., 0)) or equally over all nu means
    (mu_j = sqrt(lam/nu)); sum mu_j^2 = lam in both cases up to rounding.
    """

    n_samples: int = 1_000_000
    seed: int = 42
    mu_vector_policy: str = "single_component"
    chunk: int = 1 << 18

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise DomainError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.mu_vector_policy not in MU_POLICIES:
            raise DomainError(f"mu_vector_policy must be one of {MU_POLICIES}, got {self.mu_vector_policy!r}")


def standard_normals(bitgen, count):
    """Normals by inversion: u = ((raw >> 11) + 1/2) 2^-53, z = Phi^{-1}(u).

    ``raw`` are 64-bit outputs of the generator; u lies strictly inside (0, 1),
    so the inverse CDF is always finite.
    """
    raw = bitgen.random_raw(count)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return special.ndtri(u)


def mu_vector(n, lam, policy):
    if policy == "single_component":
        mu = np.zeros(n)
        mu[0] = math.sqrt(lam)
        return mu
    return np.full(n, math.sqrt(lam / n))


def mc_cdf(n, lam, x, cfg=None):
    """``(estimate, std_error)`` of P(xi <= x), xi = sum_{j=1}^n (Z_j + mu_j)^2.

    The generator is PCG64 seeded with ``cfg.seed``; samples are drawn in
    chunks of ``cfg.chunk`` rows of n normals each, so results depend only on
    the configuration and arguments.
    """
    cfg = cfg or McConfig()
    if int(n) != n or n < 1:
        raise DomainError(f"mc_cdf needs integer degrees of freedom >= 1, got {n!r}")
    if not (lam >= 0 and x >= 0):
        raise DomainError("mc_cdf needs lam >= 0 and x >= 0")
    n = int(n)
    if x == 0:
        return 0.0, 0.0
    bitgen = np.random.PCG64(int(cfg.seed))
    mu = mu_vector(n, float(lam), cfg.mu_vector_policy)
    hits = 0
    left = int(cfg.n_samples)
    while left > 0:
        m = min(left, cfg.chunk)
        z = standard_normals(bitgen, m * n).reshape(m, n)
        xi = np.sum((z + mu) ** 2, axis=1)
        hits += int(np.count_nonzero(xi <= x))
        left -= m
    p = hits / cfg.n_samples
    return p, math.sqrt(p * (1.0 - p) / cfg.n_samples)
