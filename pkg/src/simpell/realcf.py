"""Certified real arithmetic and continued-fraction expansion.

Numbers are closed intervals ``[lo, hi]`` of binary floating point values
(raw :mod:`mpmath.libmp` tuples) with outward rounding on every operation, so
the true value always lies inside.  A partial quotient is accepted only when
the floor is the same at both ends of the enclosure; otherwise expansion
stops with :class:`UncertifiedExpansion` instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from mpmath import libmp as L
from mpmath import mp

from .quadfield import QuadElem

DEFAULT_PRECISION = 192
PRECISION_CEILING = 1 << 15
GOLDEN = (1 + math.sqrt(5)) / 2

_F, _C = L.round_floor, L.round_ceiling


class UncertifiedExpansion(ArithmeticError):
    """Precision ran out before a decision could be certified."""


def _ulps(x, prec: int):
    # a few units in the last place at ``prec`` bits; covers the guard-bit
    # error of mpmath's elementary functions
    if x == L.fzero:
        return L.from_man_exp(1, -2 * prec)
    _, _, exp, bc = x
    return L.from_man_exp(4, exp + bc - prec)


def _down(x, prec):
    return L.mpf_sub(x, _ulps(x, prec), prec, _F)


def _up(x, prec):
    return L.mpf_add(x, _ulps(x, prec), prec, _C)


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


Number = Union[int, Fraction, "CertifiedReal"]


@dataclass(frozen=True)
class CertifiedReal:
    """Enclosure ``[lo, hi]`` of a real number, computed at ``prec`` bits."""

    lo: tuple
    hi: tuple
    prec: int = DEFAULT_PRECISION

    @classmethod
    def exact(cls, x: int | Fraction, prec: int = DEFAULT_PRECISION) -> "CertifiedReal":
        if isinstance(x, int):
            v = L.from_int(x)
            return cls(v, v, prec)
        x = Fraction(x)
        return cls(L.from_rational(x.numerator, x.denominator, prec, _F),
                   L.from_rational(x.numerator, x.denominator, prec, _C), prec)

    @classmethod
    def from_quad(cls, alpha: QuadElem, prec: int = DEFAULT_PRECISION) -> "CertifiedReal":
        root = sqrt(cls.exact(alpha.b, prec))
        return (root * alpha.v + alpha.u) / alpha.denom

    def _coerce(self, other: Number) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        return CertifiedReal.exact(other, self.prec)

    # -- accessors
    @property
    def value(self):
        return mp.make_mpf(L.mpf_shift(L.mpf_add(self.lo, self.hi, self.prec + 8, L.round_nearest), -1))

    @property
    def radius(self):
        return mp.make_mpf(L.mpf_shift(L.mpf_sub(self.hi, self.lo, self.prec, _C), -1))

    @property
    def lower(self) -> Fraction:
        return _to_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return _to_fraction(self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, (int, Fraction)):
            return self.lower <= x <= self.upper
        x = mp.mpf(x)._mpf_
        return L.mpf_le(self.lo, x) and L.mpf_le(x, self.hi)

    def is_positive(self) -> bool:
        return L.mpf_sign(self.lo) > 0

    def is_negative(self) -> bool:
        return L.mpf_sign(self.hi) < 0

    def floor(self) -> int:
        """Floor of the enclosed number, if the enclosure decides it."""
        a = int(L.to_int(L.mpf_floor(self.lo)))
        if a != int(L.to_int(L.mpf_floor(self.hi))):
            raise UncertifiedExpansion(f"floor ambiguous on {self}")
        return a

    def floor_upper(self) -> int:
        """An integer >= floor of the enclosed number (floor of ``hi``)."""
        return int(L.to_int(L.mpf_floor(self.hi)))

    def ceil_upper(self) -> int:
        return int(L.to_int(L.mpf_ceil(self.hi)))

    # -- arithmetic
    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(L.mpf_neg(self.hi), L.mpf_neg(self.lo), self.prec)

    def __add__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return CertifiedReal(L.mpf_add(self.lo, o.lo, p, _F), L.mpf_add(self.hi, o.hi, p, _C), p)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "CertifiedReal":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "CertifiedReal":
        return self._coerce(other) - self

    def __mul__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        los = [L.mpf_mul(x, y, p, _F) for x, y in pairs]
        his = [L.mpf_mul(x, y, p, _C) for x, y in pairs]
        return CertifiedReal(min(los, key=_key), max(his, key=_key), p)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if not (o.is_positive() or o.is_negative()):
            raise UncertifiedExpansion(f"division by an enclosure of zero: {o}")
        p = max(self.prec, o.prec)
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        los = [L.mpf_div(x, y, p, _F) for x, y in pairs]
        his = [L.mpf_div(x, y, p, _C) for x, y in pairs]
        return CertifiedReal(min(los, key=_key), max(his, key=_key), p)

    def __rtruediv__(self, other: Number) -> "CertifiedReal":
        return self._coerce(other) / self

    def __abs__(self) -> "CertifiedReal":
        if L.mpf_sign(self.lo) >= 0:
            return self
        if L.mpf_sign(self.hi) <= 0:
            return -self
        top = max(L.mpf_neg(self.lo), self.hi, key=_key)
        return CertifiedReal(L.fzero, top, self.prec)

    def with_prec(self, prec: int) -> "CertifiedReal":
        return CertifiedReal(self.lo, self.hi, prec)

    def __str__(self) -> str:
        digits = max(10, int(self.prec * 0.30103) // 4)
        return f"{mp.nstr(self.value, digits)} +/- {mp.nstr(self.radius, 3)}"

    __repr__ = __str__


def _key(x):
    return mp.make_mpf(x)


def log(x: CertifiedReal) -> CertifiedReal:
    if not x.is_positive():
        raise ValueError(f"log of non-positive enclosure {x}")
    p = x.prec
    return CertifiedReal(_down(L.mpf_log(x.lo, p, _F), p), _up(L.mpf_log(x.hi, p, _C), p), p)


def exp(x: CertifiedReal) -> CertifiedReal:
    p = x.prec
    return CertifiedReal(_down(L.mpf_exp(x.lo, p, _F), p), _up(L.mpf_exp(x.hi, p, _C), p), p)


def sqrt(x: CertifiedReal) -> CertifiedReal:
    if L.mpf_sign(x.lo) < 0:
        raise ValueError(f"sqrt of possibly negative enclosure {x}")
    p = x.prec
    lo = L.mpf_sqrt(x.lo, p, _F)
    if L.mpf_sign(lo) > 0:
        lo = _down(lo, p)
    return CertifiedReal(lo, _up(L.mpf_sqrt(x.hi, p, _C), p), p)


def euler_e(prec: int = DEFAULT_PRECISION) -> CertifiedReal:
    return exp(CertifiedReal.exact(1, prec))


def log_quad(alpha: QuadElem, prec: int = DEFAULT_PRECISION) -> CertifiedReal:
    """Enclosure of log((u + v sqrt(b))/denom) for an element > 1."""
    if not alpha.gt_one():
        raise ValueError(f"log_quad needs an element > 1, got {alpha}")
    return log(CertifiedReal.from_quad(alpha, prec))


def log_gamma(x: int, prec: int = DEFAULT_PRECISION) -> CertifiedReal:
    """Enclosure of log(x + sqrt(x^2 - 1))."""
    if x < 2:
        raise ValueError(f"log_gamma needs x >= 2, got {x}")
    c = CertifiedReal.exact(x, prec)
    return log(c + sqrt(CertifiedReal.exact(x * x - 1, prec)))


def log_sqrt(b: int, prec: int = DEFAULT_PRECISION) -> CertifiedReal:
    """Enclosure of log(sqrt(b))."""
    return log(CertifiedReal.exact(b, prec)) / 2


# ------------------------------------------------------- continued fractions

@dataclass
class ContinuedFraction:
    """Certified partial quotients ``terms`` of ``mu`` and their convergents.

    ``convergents[i] == (p_i, q_i)`` is the value of ``[a_0; a_1, ..., a_i]``.
    Every entry up to ``certified_upto`` is provably a partial quotient of the
    number enclosed by ``mu``.
    """

    mu: CertifiedReal
    terms: list[int] = field(default_factory=list)
    convergents: list[tuple[int, int]] = field(default_factory=list)
    stopped: bool = False
    truncated: bool = False

    @property
    def certified_upto(self) -> int:
        return len(self.terms) - 1

    @property
    def prec(self) -> int:
        return self.mu.prec


StopRule = Callable[[int, int], bool]
MuSource = Union[CertifiedReal, Callable[[int], CertifiedReal]]


def _expand_once(mu: CertifiedReal, stop: StopRule | None, max_terms: int,
                 partial: bool = False) -> ContinuedFraction:
    cf = ContinuedFraction(mu)
    x = mu
    p0, p1, q0, q1 = 0, 1, 1, 0
    for i in range(max_terms):
        try:
            a = x.floor()
            if i > 0 and a < 1:
                raise UncertifiedExpansion("non-positive partial quotient")
        except UncertifiedExpansion:
            if not partial:
                raise
            cf.truncated = True
            break
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        cf.terms.append(a)
        cf.convergents.append((p1, q1))
        if stop is not None and stop(i, q1):
            cf.stopped = True
            break
        if i + 1 < max_terms:
            try:
                x = 1 / (x - a)
            except UncertifiedExpansion:
                if not partial:
                    raise
                cf.truncated = True
                break
    return cf


def expand_cf(mu: MuSource, stop: StopRule | None = None, max_terms: int = 1000,
              precision: int = DEFAULT_PRECISION, ceiling: int = PRECISION_CEILING,
              partial: bool = False) -> ContinuedFraction:
    """Certified continued-fraction expansion of ``mu``.

    Expands until ``stop(i, q_i)`` returns true or ``max_terms`` terms are
    known.  When ``mu`` is a callable ``prec -> CertifiedReal`` the expansion
    restarts at doubled precision whenever a term cannot be certified, up to
    ``ceiling`` bits; a fixed enclosure gets a single attempt.  With
    ``partial=True`` a fixed enclosure instead yields its certified prefix,
    flagged ``truncated``.
    """
    if isinstance(mu, CertifiedReal):
        return _expand_once(mu, stop, max_terms, partial)
    prec = precision
    while prec <= ceiling:
        try:
            return _expand_once(mu(prec), stop, max_terms)
        except UncertifiedExpansion:
            prec *= 2
    raise UncertifiedExpansion(f"expansion not certified within {ceiling} bits")


def max_terms_for(bound: float) -> int:
    """Number of terms after which q_k >= bound is guaranteed (q_k >= Phi^(k-1))."""
    return math.ceil(math.log(max(bound, 2)) / math.log(GOLDEN)) + 2


def legendre_lower_bound(cf: ContinuedFraction, ell: int) -> Fraction:
    """1/((2 + A) q_ell) with A = max(a_1, ..., a_{ell+1}).

    Lower bound for |p - q mu| over all fractions p/q with q <= q_ell.  The
    term a_{ell+1} is needed for q = q_ell itself, since
    |p_ell - q_ell mu| > 1/((a_{ell+1} + 2) q_ell) is sharp up to that term.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if ell + 1 > cf.certified_upto:
        raise UncertifiedExpansion(f"index {ell} needs a_{ell + 1}, certified up to {cf.certified_upto}")
    A = max(cf.terms[1 : ell + 2])
    return Fraction(1, (2 + A) * cf.convergents[ell][1])


def dist_nearest_int(q: int, theta: CertifiedReal) -> CertifiedReal:
    """Enclosure of the distance from q*theta to the nearest integer."""
    x = theta * q
    lo, hi = x.lower, x.upper
    if hi - lo >= Fraction(1, 4):
        raise UncertifiedExpansion(f"enclosure of {q}*theta too wide")
    def dist(t: Fraction) -> Fraction:
        return abs(t - math.floor(t + Fraction(1, 2)))

    d_lo, d_hi = dist(lo), dist(hi)
    low, high = min(d_lo, d_hi), max(d_lo, d_hi)
    # the distance function is a tent: interior minima at integers, maxima at halves
    if math.floor(hi) >= math.ceil(lo):
        low = Fraction(0)
    if math.floor(hi - Fraction(1, 2)) >= math.ceil(lo - Fraction(1, 2)):
        high = Fraction(1, 2)
    p = x.prec
    num_lo = L.from_rational(low.numerator, low.denominator, p, _F)
    num_hi = L.from_rational(high.numerator, high.denominator, p, _C)
    return CertifiedReal(num_lo, num_hi, p)
