"""Invariant suites of every module, runnable from the CLI (``ncx2cdf selftest``).

``quick`` uses coarse grids (a few seconds); ``full`` uses the acceptance grids.
Each suite returns the number of passed checks and a list of named failures.
"""

import itertools
import math
from dataclasses import dataclass, field

from . import hyper, marcum, ncx2, oracle, special, sv

REL = 1e-9
ABS = 1e-12


def agree(a, b, rel=REL, abs_floor=ABS):
    """|a - b| <= max(rel * max(|a|, |b|), abs_floor)."""
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_floor)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def check(self, label, cond):
        if cond:
            self.passed += 1
        else:
            self.failures.append(label)

    def guard(self, label, fn):
        """Run ``fn`` (returning bool); an exception counts as a failure."""
        try:
            ok = bool(fn())
        except Exception as exc:  # noqa: BLE001 - every failure must be reported, not raised
            self.failures.append(f"{label}: {type(exc).__name__}: {exc}")
            return
        self.check(label, ok)


def _ulp(v):
    return math.ulp(v)


def suite_special(level):
    r = SuiteResult("core-special")
    for a, x in itertools.product((0.5, 1.0, 2.0, 5.0, 10.0), (0.1, 1.0, 5.0, 20.0)):
        g = math.gamma(a)
        r.guard(f"decomposition a={a} x={x}",
                lambda: abs(special.gamma_lower(a, x) + special.gamma_upper(a, x) - g) <= 4 * _ulp(g))
        r.guard(f"recurrence a={a} x={x}",
                lambda: agree(special.gamma_lower(a + 1, x),
                              a * special.gamma_lower(a, x) - x ** a * math.exp(-x), 1e-12, 1e-300))
    nus = (0.0, 0.5, 1.0, 2.5, 5.0) if level == "full" else (0.0, 1.0, 2.5)
    zs = (0.01, 0.5, 2.0, 10.0, 50.0) if level == "full" else (0.5, 10.0)
    for nu, z in itertools.product(nus, zs):
        lo = special.bessel_i_scaled(nu, z).value
        hi = special.bessel_i_scaled(nu + 1, z).value
        r.check(f"soni nu={nu} z={z}", hi < lo)
        r.check(f"joshi-bissu nu={nu} z={z}", hi / lo < z / (2 * (nu + 1)))
        r.check(f"bounded nu={nu} z={z}", 0 < lo <= 1)
    return r


def suite_hyper(level):
    r = SuiteResult("hyper")
    for a, x, n in itertools.product((0.5, 1.0, 3.0), (0.0, 0.5, 4.0), (0, 1, 5, 12)):
        full = special.pochhammer(a, n)
        r.guard(f"pochhammer decomposition a={a} x={x} n={n}",
                lambda: abs(hyper.inc_pochhammer_lower(a, x, n) + hyper.inc_pochhammer_upper(a, x, n) - full)
                <= 4 * _ulp(full))
    for a, c, z in itertools.product((0.5, 2.0), (1.0, 2.5), (-0.5, 0.3, 0.9)):
        r.guard(f"1Gamma1 x=0 a={a} c={c} z={z}",
                lambda: agree(hyper.inc_1Gamma1(a, 0, c, z).value, hyper.hyp1f1(a, c, z).value, 1e-12, 0))
        r.guard(f"2Gamma1 x=0 a={a} c={c} z={z}",
                lambda: agree(hyper.inc_2Gamma1(a, 0, 1.5, c, z).value, hyper.hyp2f1(a, 1.5, c, z).value,
                              1e-12, 0))
        r.guard(f"2gamma1+2Gamma1 a={a} c={c} z={z}",
                lambda: agree(hyper.inc_2gamma1(a, 1.0, 1.5, c, z).value + hyper.inc_2Gamma1(a, 1.0, 1.5, c, z).value,
                              hyper.hyp2f1(a, 1.5, c, z).value, 1e-12, 0))
    errs = [abs(hyper.inc_2Gamma1(1, 1, b, 1, 0.5 / b).value - hyper.inc_1Gamma1(1, 1, 1, 0.5).value)
            for b in (8, 16, 32, 64, 128)]
    for lo, hi in zip(errs[1:], errs[:-1]):
        r.check(f"confluence ratio {hi / lo:.3f}", hi / lo >= 1.8)
    grid = (0.5, 2.0, 10.0) if level == "full" else (0.5, 10.0)
    for nu, lam, x in itertools.product((0.0, 0.5, 1.0, 3.0), grid, grid):
        args = sv.SvArgs(nu, lam, x)
        r.guard(f"S via Fox-Wright nu={nu} lam={lam} x={x}",
                lambda: agree(sv.s_via_foxwright(args), sv.s_integral(args), 1e-10, 0))
    return r


def suite_marcum(level):
    r = SuiteResult("marcum")
    mus = (0.5, 1.0, 1.5, 2.0, 5.0)
    for mu, a in itertools.product(mus, (0.1, 1.0, 3.0)):
        prev = 2.0
        for b in (0.0, 0.5, 2.0, 8.0):
            q1 = marcum.marcum_q_quadrature(marcum.MarcumArgs(mu, a, b))
            q2 = marcum.marcum_q_via_1G1(mu, a * a / 2, b * b / 2)
            tag = f"mu={mu} a={a} b={b}"
            r.check(f"range {tag}", 0 <= q1 <= 1 and 0 <= q2 <= 1)
            r.check(f"monotone {tag}", q2 <= prev)
            r.check(f"path agreement {tag}", agree(q1, q2, 1e-10, ABS))
            if b == 0:
                r.check(f"boundary {tag}", q1 == 1.0 and q2 == 1.0)
            prev = q2
    for n, a in itertools.product((0, 1, 2, 3), (0.5, 1.0, 2.0)):
        r.guard(f"diag int n={n} a={a}",
                lambda: agree(marcum.marcum_q_diag_int(n, a),
                              marcum.marcum_q_quadrature(marcum.MarcumArgs(n + 1, a, a)), 1e-10, 0))
        r.guard(f"diag halfint n={n} a={a}",
                lambda: agree(marcum.marcum_q_diag_halfint(n, a),
                              marcum.marcum_q_quadrature(marcum.MarcumArgs(n + 0.5, a, a)), 1e-10, 0))
    return r


def suite_sv(level):
    r = SuiteResult("sv-integrals")
    r.check("S+T (0,1,4)", agree(sv.st_sum_closed(sv.SvArgs(0, 1, 4)), 4 / 3, 1e-10, 0))
    r.check("S+T (1,1,4)", agree(sv.st_sum_closed(sv.SvArgs(1, 1, 4)), 2 / 3, 1e-10, 0))
    for p, b in ((1.0, 1.0), (2.0, 0.5), (0.7, 3.0), (1.5, 8.0)):
        quad = sv.s_generic(0, p, b)
        f1, f2 = sv.s0_closed_forms(p, b)
        r.check(f"S0 first closed form p={p} b={b}", agree(f1, quad, 1e-10, 0))
        r.check(f"S0 second closed form p={p} b={b}", agree(f2, quad, 1e-10, 0))
    for lam, x in ((4, 1), (9, 1), (1, 0.25), (20, 5)):
        r.guard(f"agrest-maksimov lam={lam} x={x}",
                lambda: agree(sv.agrest_maksimov_rhs(lam, x), sv.agrest_maksimov_lhs(lam, x), 1e-9, 0))
    ns = (1, 2, 3, 4, 8) if level == "full" else (1, 4)
    xs = (0.1, 1.0, 5.0, 40.0) if level == "full" else (0.1, 5.0)
    for n, x in itertools.product(ns, xs):
        for lam in (0.25 * n, 0.5 * n, n):
            if lam == x:
                continue
            r.guard(f"temme difference n={n} lam={lam} x={x}", lambda: sv.temme_difference(n, lam, x) >= 0)
            r.check(f"S positive n={n} lam={lam} x={x}", sv.s_integral(sv.SvArgs(0.5 * n, lam, x)) > 0)
    return r


def _grid(level):
    if level == "full":
        return (2, 4, 8, 16), (1, 2, 3, 5, 7), (0.25, 1.0, 4.0, 20.0), (0.1, 1.0, "lam", 5.0, 40.0)
    return (2, 8), (1, 3), (1.0, 20.0), (0.1, "lam", 40.0)


def grid_points(level):
    even, anyv, lams, xs = _grid(level)
    for nu in sorted(set(even) | set(anyv)):
        for lam in lams:
            for x in xs:
                yield nu, lam, (lam if x == "lam" else x)


def suite_ncx2(level):
    r = SuiteResult("ncx2")
    for nu, lam, x in grid_points(level):
        p = ncx2.Ncx2Params(nu, lam, x)
        ref = oracle.quad_cdf(nu, lam, x)
        values = {}
        for m in ncx2.applicable_methods(p):
            tag = f"{m} nu={nu} lam={lam} x={x}"
            try:
                values[m] = ncx2.cdf(p, m).value
            except Exception as exc:  # noqa: BLE001
                r.failures.append(f"{tag}: {type(exc).__name__}: {exc}")
                continue
            r.check(f"oracle {tag}", agree(values[m], ref))
            r.check(f"range {tag}", 0 <= values[m] <= 1)
        for (m1, v1), (m2, v2) in itertools.combinations(values.items(), 2):
            r.check(f"pair {m1}/{m2} nu={nu} lam={lam} x={x}", agree(v1, v2))
    xs = [10 ** (k / 20) for k in range(-60, 41)] if level == "full" else [10 ** (k / 5) for k in range(-15, 11)]
    for nu, lam in ((2, 1.0), (3, 4.0)):
        vals = [ncx2.cdf_value(nu, lam, x) for x in xs]
        r.check(f"monotone nu={nu} lam={lam}", all(b >= a for a, b in zip(vals, vals[1:])))
    for n, lam in ((2, 1.0), (3, 4.0), (4, 0.5)):
        base = ncx2.cdf_temme(n, lam, lam)
        for dx in (-1e-6, 1e-6):
            r.check(f"temme seam n={n} lam={lam} dx={dx}", abs(ncx2.cdf_temme(n, lam, lam + dx) - base) <= 1e-5)
    for nu, x in ((1, 0.5), (2, 2.0), (4, 3.0), (7, 9.0)):
        central = ncx2.cdf_central_limit(nu, x)
        for m in ncx2.applicable_methods(ncx2.Ncx2Params(nu, 1e-10, x)):
            r.guard(f"lambda->0 {m} nu={nu} x={x}",
                    lambda: agree(ncx2.cdf(ncx2.Ncx2Params(nu, 1e-10, x), m).value, central, 1e-7, 1e-7))
    return r


SUITES = {
    "core-special": suite_special,
    "hyper": suite_hyper,
    "marcum": suite_marcum,
    "sv-integrals": suite_sv,
    "ncx2": suite_ncx2,
}


def run(level="quick", names=None):
    """Run the named suites (all by default) and return their :class:`SuiteResult` list."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    return [SUITES[name](level) for name in (names or SUITES)]
