import itertools
import math

import pytest

from ncx2cdf import hyper, marcum
from ncx2cdf.base import DivergenceError, DomainError

from ncx2cdf.selftest import agree

A = marcum.MarcumArgs


def test_args_validation():
    with pytest.raises(DomainError):
        A(0, 1, 1)
    with pytest.raises(DomainError):
        A(1, -1, 1)
    with pytest.raises(DomainError):
        A(1, 1, math.inf)


def test_quadrature_examples():
    assert marcum.marcum_q_quadrature(A(2.0, 1.3, 0.0)) == 1.0
    assert marcum.marcum_q_quadrature(A(1.0, 2.0, 42.0)) <= 1e-12
    q = marcum.marcum_q_quadrature(A(1.0, math.sqrt(2), math.sqrt(2 * 0.5)))
    assert q == pytest.approx(math.exp(-1) * hyper.inc_1Gamma1(1, 0.5, 1, 1).value, rel=1e-12)
    with pytest.raises(DomainError):
        marcum.marcum_q_quadrature(A(1.0, 0.0, 1.0))


def test_cutoff_covers_gaussian_tail():
    args = A(5.0, 0.1, 0.5)
    assert marcum.cutoff(args) >= max(args.a, args.b) + 40


def test_1g1_examples():
    for M, x in ((1.0, 0.7), (2.5, 3.0)):
        assert marcum.marcum_q_via_1G1(M, 0, x) == pytest.approx(
            hyper.inc_1Gamma1(M, x, M, 0).value, rel=1e-15)
    assert marcum.marcum_q_via_1G1(1.7, 2.0, 0) == 1.0
    assert marcum.marcum_q_via_1G1(1, 1, 1) == pytest.approx(
        marcum.marcum_q_quadrature(A(1, math.sqrt(2), math.sqrt(2))), rel=1e-10)


def test_reference_values(ref):
    for mu, a, b, expect in ref["marcum"]:
        assert agree(marcum.marcum_q_quadrature(A(mu, a, b)), expect, 1e-10), (mu, a, b)
        assert agree(marcum.marcum_q_via_1G1(mu, a * a / 2, b * b / 2), expect, 1e-10), (mu, a, b)


@pytest.mark.parametrize("mu", [0.5, 1, 1.5, 2, 5])
@pytest.mark.parametrize("a", [0.1, 1, 3])
def test_range_monotone_boundary(mu, a):
    qs = [marcum.marcum_q_quadrature(A(mu, a, b)) for b in (0, 0.5, 2, 8)]
    assert qs[0] == 1.0
    assert all(0 <= q <= 1 for q in qs)
    assert all(q1 >= q2 for q1, q2 in zip(qs, qs[1:]))


@pytest.mark.parametrize("n,a", list(itertools.product([0, 1, 2, 3], [0.5, 1.0, 2.0])))
def test_diag_int_matches_quadrature(n, a):
    assert marcum.marcum_q_diag_int(n, a) == pytest.approx(marcum.marcum_q_quadrature(A(n + 1, a, a)), rel=1e-10)


@pytest.mark.parametrize("n,a", list(itertools.product([0, 1, 2, 3], [0.5, 1.0, 2.0])))
def test_diag_halfint_matches_quadrature(n, a):
    assert marcum.marcum_q_diag_halfint(n, a) == pytest.approx(
        marcum.marcum_q_quadrature(A(n + 0.5, a, a)), rel=1e-10)


def test_diag_examples():
    from ncx2cdf.special import bessel_i_scaled, erfc
    assert marcum.marcum_q_diag_int(0, 1.3) == 0.5 * (1 + bessel_i_scaled(0, 1.69).value)
    assert marcum.marcum_q_diag_int(0, 1e-8) == pytest.approx(1.0, abs=1e-15)
    assert marcum.marcum_q_diag_halfint(0, 0.7) == 0.5 * (1 + erfc(math.sqrt(2) * 0.7))
    assert marcum.marcum_q_diag_halfint(0, 5) == pytest.approx(0.5, abs=1e-20)
    with pytest.raises(DomainError):
        marcum.marcum_q_diag_int(1.5, 1)


def test_confluence():
    assert marcum.marcum_q_confluence(1.5, 0, 0.8, 10) == pytest.approx(
        hyper.inc_1Gamma1(1.5, 0.8, 1.5, 0).value, rel=1e-15)
    target = marcum.marcum_q_via_1G1(1, 1, 1)
    e7 = abs(marcum.marcum_q_confluence(1, 1, 1, 2 ** 7) - target)
    e8 = abs(marcum.marcum_q_confluence(1, 1, 1, 2 ** 8) - target)
    # first-order convergence: halving per doubling of b, up to the O(1/b^2) term
    assert 1.8 <= e7 / e8 <= 2.2
    assert marcum.marcum_q_confluence(2, 0.5, 0.5, 1e6) == pytest.approx(
        marcum.marcum_q_via_1G1(2, 0.5, 0.5), abs=1e-5)
    with pytest.raises(DivergenceError):
        marcum.marcum_q_confluence(1, 2, 1, 2)


def test_large_noncentrality_guard():
    with pytest.raises(DomainError):
        marcum.marcum_q_via_1G1(1, 800, 800)
