"""Explicit constants for a fixed b and the Baker-Davenport style reduction.

Every constant that is used as an upper bound is evaluated on the upper end
of a certified enclosure, so replacing the enclosures by exact values could
only make it smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .quadfield import QuadElem
from .realcf import (
    DEFAULT_PRECISION,
    PRECISION_CEILING,
    CertifiedReal,
    ContinuedFraction,
    UncertifiedExpansion,
    dist_nearest_int,
    euler_e,
    expand_cf,
    log,
    log_quad,
    log_sqrt,
    max_terms_for,
    sqrt,
)

# 45 * 16**5 / 4 == 45 * 4**9
MATVEEV_FACTOR = 45 * 4**9
# D^2 = 16 times the constant factors 2 * 2 * 4 of A1 A2 A3
MATVEEV_SCALE = 16**2
B_SHIFT = Fraction(52, 100)
RHS_SHIFT = Fraction(39, 100)
# kappa is taken a hair smaller than 1/(2 N ||q mu||) to make the first
# hypothesis of the reduction lemma strict
KAPPA_SHRINK = 1 - Fraction(1, 2**32)


def _hi(x: CertifiedReal) -> CertifiedReal:
    return CertifiedReal(x.hi, x.hi, x.prec)


def _lo(x: CertifiedReal) -> CertifiedReal:
    return CertifiedReal(x.lo, x.lo, x.prec)


def _quantize_up(x: Fraction, bits: int = 48) -> Fraction:
    # round up to ``bits`` significant bits so tiny enclosure changes at higher
    # precision do not move the result
    if x <= 0:
        return x
    e = math.floor(math.log2(x)) - bits
    scale = Fraction(2) ** e
    return math.ceil(x / scale) * scale


def compute_c1(b: int, eps: QuadElem) -> Fraction:
    """Rational upper bound for 1 + 1/(4b) + 1/(2 b eps)."""
    eps_lo = CertifiedReal.from_quad(eps, 128).lower
    return 1 + Fraction(1, 4 * b) + 1 / (2 * b * eps_lo)


def compute_c_mat(prec: int = DEFAULT_PRECISION) -> CertifiedReal:
    """Enclosure of (45 16^5 / 4) e^4 (26.25 + log(16 log(4e)))."""
    e = euler_e(prec)
    bracket = Fraction(2625, 100) + log(log(e * 4) * 16)
    return e * e * e * e * MATVEEV_FACTOR * bracket


def matveev_coefficient(b: int, log_eps: CertifiedReal) -> CertifiedReal:
    """K = c_Mat 16^2 log(eps) log(sqrt b)."""
    prec = log_eps.prec
    return compute_c_mat(prec) * MATVEEV_SCALE * log_eps * log_sqrt(b, prec)


def _six_e_term(prec: int) -> CertifiedReal:
    six_e = euler_e(prec) * 6
    return six_e * log(six_e)


def matveev_gap(m: int, K: CertifiedReal, C: CertifiedReal) -> CertifiedReal:
    """f(m) = 2m - 0.39 - K log(C (m + 0.52)); solutions m satisfy f(m) < 0."""
    return (2 * m - RHS_SHIFT) - K * log(C * (m + B_SHIFT))


def c_m_fallback(K: CertifiedReal, C: CertifiedReal) -> int:
    """Closed-form bound from ``w < c log w  =>  w < 2 c log c``.

    With w = C (m + 0.52) the defining inequality gives
    w < C (K/2 + 0.715) log w, since log w >= 1 here.
    """
    c = C * (K / 2 + Fraction(715, 1000))
    return (_hi(c) * log(_hi(c)) * 2 / _lo(C)).ceil_upper()


def compute_c_m(b: int, log_eps: CertifiedReal, method: str = "bracket") -> int:
    """Integer c_m with every exponent m of the Matveev inequality below it.

    ``method="bracket"`` returns the smallest integer M at which f(M) > 0 is
    certified, found by bisection; ``method="fallback"`` returns the closed
    form 2 c log c.  The bracket result never exceeds the fallback.
    """
    prec = log_eps.prec
    K = _hi(matveev_coefficient(b, log_eps))
    C = _six_e_term(prec)
    upper = c_m_fallback(K, C)
    if method == "fallback":
        return upper

    def positive(m: int) -> bool:
        return matveev_gap(m, K, C).is_positive()

    if not positive(upper):
        return upper
    # f is increasing beyond K, and f(K) < 0
    lower = max(1, K.floor_upper())
    if positive(lower):
        return upper
    while upper - lower > 1:
        mid = (lower + upper) // 2
        if positive(mid):
            upper = mid
        else:
            lower = mid
    return upper


@dataclass
class BoundSet:
    """Per-b constants; ``cf_mu`` is the expansion of log(sqrt b)/log(eps)."""

    b: int
    eps: QuadElem
    log_eps: CertifiedReal
    c1: Fraction
    c_mat: CertifiedReal
    c_m: int
    c0: CertifiedReal
    cf_mu: ContinuedFraction
    witness_index: int
    c_n1: int

    @property
    def prec(self) -> int:
        return self.log_eps.prec

    @property
    def witness_q(self) -> int:
        return self.cf_mu.convergents[self.witness_index][1]

    @property
    def witness_A(self) -> int:
        return max(self.cf_mu.terms[1 : self.witness_index + 1])


def compute_c0(b: int, c_m: int, c1: Fraction, log_eps: CertifiedReal) -> CertifiedReal:
    return (c1 * c1 * b + c1) * c_m / log_eps


def compute_c_n1(c0: CertifiedReal, log_eps: CertifiedReal, q_k: int, A: int) -> int:
    """floor((log q_k + log c0 + log(2 + A)) / (2 log eps))."""
    prec = log_eps.prec
    num = log(CertifiedReal.exact(q_k, prec)) + log(c0) + log(CertifiedReal.exact(2 + A, prec))
    return (num / (log_eps * 2)).floor_upper()


def _bounds_at(b: int, eps: QuadElem, prec: int) -> BoundSet:
    log_eps = log_quad(eps, prec)
    c1 = compute_c1(b, eps)
    c_m = compute_c_m(b, log_eps)
    c0 = compute_c0(b, c_m, c1, log_eps)
    mu = log_sqrt(b, prec) / log_eps
    cf = expand_cf(mu, stop=lambda i, q: i >= 1 and q >= c_m,
                   max_terms=max_terms_for(c_m) + 2)
    if not cf.stopped:
        raise UncertifiedExpansion(f"no convergent with q >= c_m for b={b}")
    k = cf.certified_upto
    A = max(cf.terms[1 : k + 1])
    c_n1 = compute_c_n1(c0, log_eps, cf.convergents[k][1], A)
    return BoundSet(b, eps, log_eps, c1, compute_c_mat(prec), c_m, c0, cf, k, c_n1)


def compute_bounds(b: int, eps: QuadElem, precision: int = DEFAULT_PRECISION,
                   ceiling: int = PRECISION_CEILING) -> BoundSet:
    """All per-b constants, doubling the precision until the expansion of mu
    is certified far enough."""
    prec = precision
    while prec <= ceiling:
        try:
            return _bounds_at(b, eps, prec)
        except UncertifiedExpansion:
            prec *= 2
    raise UncertifiedExpansion(f"bounds for b={b} not certified within {ceiling} bits")


def compute_c_l(log_gamma: CertifiedReal, pi: int) -> int:
    """floor(log gamma / log(2 sqrt(Pi))), at least 1."""
    if pi < 1:
        raise ValueError("square-free part must be positive")
    prec = log_gamma.prec
    denom = log(sqrt(CertifiedReal.exact(pi, prec)) * 2)
    return max(1, (log_gamma / denom).floor_upper())


def compute_c_n2_initial(l: int, c_m: int, log_gamma: CertifiedReal, c1: Fraction,
                         b: int, log_eps: CertifiedReal) -> int:
    """floor((c_m log gamma + l log(c1 sqrt b)) / log eps); bounds l * n2."""
    prec = log_gamma.prec
    shift = log(CertifiedReal.exact(c1, prec)) + log_sqrt(b, prec)
    return ((log_gamma * c_m + shift * l) / log_eps).floor_upper()


# ------------------------------------------------------------------ reduction

@dataclass(frozen=True)
class ReductionInstance:
    """|n mu + tau - x| < prefactor exp(-decay n) with 0 < n < N."""

    mu: CertifiedReal
    tau: CertifiedReal
    prefactor: CertifiedReal
    decay: CertifiedReal
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if not (self.prefactor.is_positive() and self.decay.is_positive()):
            raise ValueError("prefactor and decay must be positive")


@dataclass(frozen=True)
class Reduction:
    bound: int
    index: int
    q: int
    kappa: Fraction
    prec: int


def reduced_bound(kappa: Fraction, q: int, inst: ReductionInstance) -> int:
    """floor(log(2 kappa q prefactor) / decay), clipped at 0."""
    arg = _hi(inst.prefactor) * (2 * kappa * q)
    if not arg.is_positive():
        return 0
    return max(0, (log(arg) / _lo(inst.decay)).floor_upper())


def _reduce(inst: ReductionInstance, cf: ContinuedFraction,
            initial_bound: int) -> tuple[Reduction | None, str]:
    two_n = 2 * inst.N
    for k, (_, q) in enumerate(cf.convergents):
        try:
            d_mu = dist_nearest_int(q, inst.mu)
            d_tau = dist_nearest_int(q, inst.tau)
        except UncertifiedExpansion:
            return None, "precision"
        if d_mu.upper == 0:
            return None, "precision"
        kappa = KAPPA_SHRINK / (two_n * _quantize_up(d_mu.upper))
        if kappa <= 1:
            continue
        bound = reduced_bound(kappa, q, inst)
        if bound > initial_bound:
            return None, "exceeds initial bound"
        if kappa * d_tau.lower > 1:
            return Reduction(bound, k, q, kappa, inst.mu.prec), "ok"
    return None, "precision" if cf.truncated else "no convergent"


def baker_davenport_reduce(inst: ReductionInstance, cf: ContinuedFraction | None = None,
                           initial_bound: int | None = None,
                           max_terms: int = 400) -> Reduction | None:
    """Try to shrink the bound N on n.

    Walks the convergents p_k/q_k of mu.  With kappa = 1/(2 N ||q_k mu||),
    a convergent works once kappa > 1 and kappa ||q_k tau|| > 1; the new
    bound is floor(log(2 kappa q_k prefactor)/decay).  Returns ``None`` when
    no convergent in the certified range works, or when any bound it could
    still produce would exceed ``initial_bound`` (default N).
    """
    if cf is None:
        cf = expand_cf(inst.mu, max_terms=max_terms, partial=True)
    return _reduce(inst, cf, inst.N if initial_bound is None else initial_bound)[0]


def reduce_adaptive(make: Callable[[int], ReductionInstance], precision: int = DEFAULT_PRECISION,
                    ceiling: int = PRECISION_CEILING, initial_bound: int | None = None,
                    max_terms: int = 400) -> tuple[Reduction | None, str]:
    """Reduction with the precision doubled whenever the certified part of
    the expansion runs out before a decision.

    Returns the reduction (or ``None``) and a short reason string.
    """
    prec = precision
    while prec <= ceiling:
        inst = make(prec)
        cf = expand_cf(inst.mu, max_terms=max_terms, partial=True)
        result, reason = _reduce(inst, cf, inst.N if initial_bound is None else initial_bound)
        if reason != "precision":
            return result, reason
        prec *= 2
    return None, f"not certified within {ceiling} bits"
