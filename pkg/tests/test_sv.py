import itertools
import math

import pytest

from ncx2cdf import sv
from ncx2cdf.base import DivergenceError, DomainError

S = sv.SvArgs
GRID = list(itertools.product([0, 0.5, 1, 3], [0.5, 2, 10], [0.5, 2, 10]))


def test_args():
    a = S(0.5, 1, 4)
    assert a.z == 2.0 and a.omega == pytest.approx(5 / 4 - 1, rel=1e-15)
    assert S(0, 3, 3).omega == 0.0
    with pytest.raises(DomainError):
        S(-1, 1, 1)
    with pytest.raises(DomainError):
        S(0, 0, 1)


def test_s_integral_examples(ref):
    assert sv.s_integral(S(0, 1e-12, 1e-12)) == pytest.approx(0.0, abs=1e-11)
    assert sv.s_integral(S(0, 1, 1)) == pytest.approx(ref["scalar"]["s_integral_0_1_1"], rel=1e-13)
    assert sv.s_integral(S(1, 2, 3)) == pytest.approx(sv.s_via_foxwright(S(1, 2, 3)), rel=1e-10)


@pytest.mark.parametrize("nu,lam,x", GRID)
def test_s_foxwright_cross_path(nu, lam, x):
    a = S(nu, lam, x)
    assert sv.s_integral(a) > 0
    assert sv.s_via_foxwright(a) == pytest.approx(sv.s_integral(a), rel=1e-10)


def test_foxwright_at_quarter_and_small_product():
    a = S(0.5, 3, 3)  # z = 1/4 exactly
    assert sv.s_via_foxwright(a) == pytest.approx(sv.s_integral(a), rel=1e-10)
    assert sv.s_via_foxwright(S(0, 1e-8, 1e-8)) == pytest.approx(1e-8, rel=1e-6)
    assert sv.s_via_foxwright(S(0, 1, 4)) == pytest.approx(sv.s_integral(S(0, 1, 4)), rel=1e-10)


@pytest.mark.parametrize("p,b", [(1, 1), (2, 0.5), (0.5, 2), (0.3, 6), (3, 10)])
def test_s0_closed_forms(p, b):
    f1, f2 = sv.s0_closed_forms(p, b)
    quad = sv.s_generic(0, p, b)
    assert f1 == pytest.approx(quad, rel=1e-10)
    assert f2 == pytest.approx(quad, rel=1e-10)


def test_s0_closed_forms_small_b():
    f1, f2 = sv.s0_closed_forms(1.0, 1e-9)
    assert f1 == pytest.approx(1e-9, rel=1e-6)
    assert abs(f2) < 1e-8


def test_st_sum_closed():
    assert sv.st_sum_closed(S(0, 1, 4)) == pytest.approx(4 / 3, rel=1e-15)
    assert sv.st_sum_closed(S(1, 1, 4)) == pytest.approx(2 / 3, rel=1e-15)
    with pytest.raises(DomainError):
        sv.st_sum_closed(S(0, 2, 2))


def test_tail_integral_against_direct_quadrature():
    from scipy import integrate, special
    a = S(0, 1, 4)
    direct = integrate.quad(lambda t: math.exp(-a.omega * t) * special.ive(0, t), a.z, math.inf,
                            epsabs=1e-15, epsrel=1e-13)[0]
    assert sv.t_integral(a) == pytest.approx(direct, rel=1e-10)
    assert sv.s_integral(a) + direct == pytest.approx(sv.st_sum_closed(a), rel=1e-10)


def test_lommel():
    assert sv.lommel_y(1, 0, 2.0).value == 0.0
    assert sv.lommel_y(0, 0, 2.0).value == pytest.approx(2.2795853023360673, rel=1e-14)  # I_0(2)
    with pytest.raises(DivergenceError):
        sv.lommel_y(0, 3.0, 2.0)
    with pytest.raises(DomainError):
        sv.lommel_y(0, 1.0, 800.0)


@pytest.mark.parametrize("lam,x", [(4, 1), (9, 1), (20, 0.1)])
def test_agrest_maksimov(lam, x, ref):
    assert sv.agrest_maksimov_rhs(lam, x) == pytest.approx(sv.agrest_maksimov_lhs(lam, x), rel=1e-9)


def test_agrest_maksimov_reference(ref):
    assert sv.agrest_maksimov_rhs(4, 1) == pytest.approx(ref["scalar"]["am_lhs_4_1"], rel=1e-12)
    with pytest.raises(DomainError):
        sv.agrest_maksimov_rhs(1, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 40.0])
def test_temme_difference_nonnegative(n, x):
    for lam in (0.25 * n, 0.5 * n, float(n)):
        if lam != x:
            assert sv.temme_difference(n, lam, x) >= 0
