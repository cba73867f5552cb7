"""Small worked values for every operation, each checked exactly or to 1e-9."""

from fractions import Fraction

import mpmath
import pytest

from simpell.arith import (
    Factorization,
    factorize,
    is_perfect_square,
    isqrt,
    rational_square_root,
    square_divisors,
    squarefree_part,
)
from simpell.bounds import compute_c1, compute_c_l
from simpell.quadfield import QuadElem, candidate_x, fundamental_unit, pell_fundamental_solution
from simpell.realcf import CertifiedReal, dist_nearest_int, log_gamma, log_quad
from simpell.verifier import SKIP_TOO_SMALL, brute_force_oracle, verify_b


def test_integer_roots():
    assert isqrt(0) == 0 and isqrt(2401) == 49 and isqrt(10**40) == 10**20
    assert is_perfect_square(2401) == 49
    assert is_perfect_square(2) is None
    assert is_perfect_square(235225) == 485


def test_factor_tables():
    assert factorize(99).factors == ((3, 2), (11, 1))
    one = factorize(1)
    assert one.factors == () and one.cofactor == 1
    assert factorize(9800).factors == ((2, 3), (5, 2), (7, 2))


def test_squarefree_and_divisors():
    assert squarefree_part(Factorization(48, ((2, 4), (3, 1)))) == 3
    assert squarefree_part(factorize(99)) == 11
    assert squarefree_part(factorize(9800)) == 2
    assert square_divisors(factorize(99)) == [1, 3]
    assert square_divisors(factorize(1)) == [1]
    assert square_divisors(factorize(9800)) == [1, 2, 5, 7, 10, 14, 35, 70]


def test_rational_squares():
    assert rational_square_root(9800, 98) == (10, 1)
    assert rational_square_root(2, 1) is None
    assert rational_square_root(9800, 99) is None


def test_quadratic_arithmetic():
    e = QuadElem(5, 1, 1, 24)
    assert (e * e.conj()) == QuadElem.integer(1, 24)
    assert e * e == QuadElem(49, 10, 1, 24)
    phi = QuadElem(1, 1, 2, 5)
    assert phi * phi == QuadElem(3, 1, 2, 5)
    assert e.norm() == 1 and phi.norm() == -1 and QuadElem(3, 2, 1, 2).norm() == 1


def test_units_and_pell():
    assert fundamental_unit(24) == QuadElem(5, 1, 1, 24)
    assert fundamental_unit(2) == QuadElem(1, 1, 1, 2)
    assert fundamental_unit(5) == QuadElem(1, 1, 2, 5)
    for b, sol in ((24, (5, 1)), (2, (3, 2)), (5, (9, 4))):
        f = pell_fundamental_solution(b)
        assert (f.z1, f.x1) == sol
    eps = fundamental_unit(24)
    assert [candidate_x(eps, n) for n in (1, 2, 3)] == [1, 10, 99]


@pytest.mark.parametrize("x, value", [
    (10, 2.9932228461),
    (2, 1.3169578969),
    # log(99 + sqrt 9800) = 5.28824152..., checked against mpmath below
    (99, 5.2882415221),
])
def test_log_gamma_values(x, value):
    lg = log_gamma(x)
    assert abs(float(lg.value) - value) < 1e-9
    with mpmath.workprec(300):
        assert abs(mpmath.log(x + mpmath.sqrt(x * x - 1)) - value) < 1e-9


def test_log_rejects_one():
    with pytest.raises(ValueError):
        log_quad(QuadElem(1, 0, 1, 24))


def test_distances():
    half = CertifiedReal.exact(Fraction(1, 2))
    d = dist_nearest_int(2, half)
    assert d.lower == 0 and d.upper == 0


def test_c1_values():
    assert abs(float(compute_c1(24, QuadElem(5, 1, 1, 24))) - 1.01252) < 1e-5
    assert abs(float(compute_c1(2, QuadElem(1, 1, 1, 2))) - 1.22855) < 1e-5
    for b in (2, 3, 24, 1000, 9999):
        c1 = compute_c1(b, fundamental_unit(b))
        assert 1 < c1 <= 1 + Fraction(1, 4 * b) + Fraction(1, 2 * b)


def test_c_l_values():
    assert compute_c_l(log_gamma(10), 11) == 1
    assert compute_c_l(log_gamma(99), 2) == 5


def test_verifier_values():
    r = verify_b(24)
    assert r.candidates[0].x == 1 and r.candidates[0].skipped == SKIP_TOO_SMALL
    assert not r.pairs
    assert verify_b(4).candidates == []


def test_oracle_values():
    assert brute_force_oracle(24, 100) == [(5, 1), (49, 10), (485, 99)]
    assert brute_force_oracle(2, 12) == [(3, 2), (17, 12)]
    assert brute_force_oracle(3, 1) == [(2, 1)]
