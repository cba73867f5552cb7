from fractions import Fraction

import mpmath
import pytest

from simpell.bounds import (
    ReductionInstance,
    baker_davenport_reduce,
    compute_bounds,
    compute_c1,
    compute_c_l,
    compute_c_m,
    compute_c_mat,
    compute_c_n2_initial,
    reduce_adaptive,
)
from simpell.quadfield import QuadElem, fundamental_unit
from simpell.realcf import CertifiedReal, log, log_gamma, log_quad, log_sqrt, sqrt


def _gap_oracle(b, eps_float_expr, m):
    """f(m) with mpmath at 400 bits, written out from scratch."""
    with mpmath.workprec(400):
        e = mpmath.e
        c_mat = 45 * mpmath.mpf(16) ** 5 / 4 * e**4 * (mpmath.mpf("26.25") + mpmath.log(16 * mpmath.log(4 * e)))
        K = c_mat * 256 * mpmath.log(eps_float_expr()) * mpmath.log(mpmath.sqrt(b))
        C = 6 * e * mpmath.log(6 * e)
        return 2 * m - mpmath.mpf("0.39") - K * mpmath.log(C * (m + mpmath.mpf("0.52")))


@pytest.mark.parametrize("b, eps_expr, expected", [
    (24, lambda: 5 + mpmath.sqrt(24), 334499083821827),
    (2, lambda: 1 + mpmath.sqrt(2), 26130157724822),
    (5, lambda: (1 + mpmath.sqrt(5)) / 2, 33358923330238),
])
def test_c_m_is_smallest_certified_root(b, eps_expr, expected):
    eps = fundamental_unit(b)
    M = compute_c_m(b, log_quad(eps))
    assert M == expected
    assert _gap_oracle(b, eps_expr, M) > 0
    assert _gap_oracle(b, eps_expr, M - 1) <= 0


def test_c_m_b24_matches_published_scale():
    M = compute_c_m(24, log_quad(QuadElem(5, 1, 1, 24)))
    assert 1 / 1.05 <= M / 3.345e14 <= 1.05


@pytest.mark.parametrize("b", [2, 3, 5, 7, 24, 61, 94, 199, 9999])
def test_fallback_dominates(b):
    le = log_quad(fundamental_unit(b))
    assert compute_c_m(b, le) <= compute_c_m(b, le, method="fallback")


def test_fallback_value_b24():
    assert compute_c_m(24, log_quad(QuadElem(5, 1, 1, 24)), method="fallback") == 604041538210874


def test_c_mat():
    assert abs(float(compute_c_mat().value) - 1.9253e10) / 1.9253e10 < 1e-4


def test_c1():
    c1 = compute_c1(24, QuadElem(5, 1, 1, 24))
    assert isinstance(c1, Fraction)
    with mpmath.workprec(300):
        exact = 1 + mpmath.mpf(1) / 96 + 1 / (48 * (5 + mpmath.sqrt(24)))
        gap = mpmath.mpf(c1.numerator) / c1.denominator - exact
    assert 0 <= gap < 1e-30
    assert abs(float(c1) - 1.0125212607) < 1e-9


@pytest.mark.parametrize("b, c_n1", [(24, 15), (2, 39), (5, 74), (9999, 7)])
def test_c_n1(b, c_n1):
    bs = compute_bounds(b, fundamental_unit(b))
    assert bs.c_n1 == c_n1
    assert bs.witness_q >= bs.c_m
    # the witness is the first convergent past c_m
    assert bs.cf_mu.convergents[bs.witness_index - 1][1] < bs.c_m


def test_bounds_b24_witness():
    bs = compute_bounds(24, QuadElem(5, 1, 1, 24))
    assert bs.witness_q == 412151472078015
    assert bs.witness_A == 29
    assert bs.cf_mu.terms[:5] == [0, 1, 2, 3, 1]


def test_c_l():
    lg = log_gamma(485)
    # x^2 - 1 = 484 * 486 = 2^3 3^5 11^2: Pi = 6, log gamma / log(2 sqrt 6) = 4.33
    assert compute_c_l(lg, 6) == 4
    assert compute_c_l(lg, 10**9) == 1
    with pytest.raises(ValueError):
        compute_c_l(lg, 0)


def test_initial_bound_b24():
    eps = QuadElem(5, 1, 1, 24)
    c1 = compute_c1(24, eps)
    c_m = compute_c_m(24, log_quad(eps))
    assert compute_c_n2_initial(1, c_m, log_gamma(10), c1, 24, log_quad(eps)) == 436754697205651


def _b24_instance(prec, l=1, x=10, N=None):
    eps = QuadElem(5, 1, 1, 24)
    c1 = CertifiedReal.exact(compute_c1(24, eps), prec)
    lg, le = log_gamma(x, prec), log_quad(eps, prec)
    return ReductionInstance(
        mu=le / lg, tau=-(log_sqrt(24, prec) * l) / lg,
        prefactor=(c1 * c1 * 24 + c1) * l / lg, decay=le * 2 / l,
        N=N or 436754697205651 * l + 1)


def test_reduction_b24():
    red, reason = reduce_adaptive(_b24_instance, initial_bound=436754697205652)
    assert reason == "ok"
    assert red.bound == 8 and red.q == 2152275738683384
    assert 15 < float(red.kappa) < 16


def test_reduction_rejects_too_low_precision():
    inst = _b24_instance(64)
    assert baker_davenport_reduce(inst, max_terms=400) is None


def test_reduction_refuses_planted_solution():
    prec = 192
    mu = log(CertifiedReal.exact(3, prec)) / log(CertifiedReal.exact(2, prec))
    tau = -(mu * 37) + 5
    one = CertifiedReal.exact(1, prec)
    red = baker_davenport_reduce(ReductionInstance(mu, tau, one, one, 10**4))
    assert red is None or red.bound >= 37


def test_instance_validation():
    one = CertifiedReal.exact(1)
    with pytest.raises(ValueError):
        ReductionInstance(one, one, one, one, 0)
    with pytest.raises(ValueError):
        ReductionInstance(one, one, -one, one, 5)


def test_reduction_bound_on_irrational():
    prec = 192
    mu = sqrt(CertifiedReal.exact(2, prec))
    tau = sqrt(CertifiedReal.exact(3, prec))
    one = CertifiedReal.exact(1, prec)
    red = baker_davenport_reduce(ReductionInstance(mu, tau, one * 10, one, 10**6))
    assert red is not None and red.bound < 10**6
    # spot check the stretch just past the bound against mpmath
    with mpmath.workprec(200):
        for n in range(red.bound + 1, red.bound + 200):
            v = n * mpmath.sqrt(2) + mpmath.sqrt(3)
            assert abs(v - mpmath.nint(v)) >= 10 * mpmath.exp(-n)
