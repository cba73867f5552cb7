"""Exact arithmetic with elements (u + v*sqrt(b))/denom of real quadratic fields."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .arith import is_perfect_square


class SquareRadicand(ValueError):
    """Raised when a routine needs a non-square radicand."""


def _check_radicand(b: int) -> None:
    if b < 2:
        raise ValueError(f"radicand must be >= 2, got {b}")
    if is_perfect_square(b) is not None:
        raise SquareRadicand(f"{b} is a perfect square")


@dataclass(frozen=True)
class QuadElem:
    """The number ``(u + v*sqrt(b)) / denom`` with ``denom`` in {1, 2}.

    Use :meth:`make` to build canonical elements; ``denom == 2`` only appears
    when ``u`` and ``v`` are both odd, which requires ``b % 4 == 1``.
    """

    u: int
    v: int
    denom: int
    b: int

    @classmethod
    def make(cls, u: int, v: int, denom: int, b: int) -> "QuadElem":
        if denom == 2:
            if u % 2 == 0 and v % 2 == 0:
                return cls(u // 2, v // 2, 1, b)
            if (u - v) % 2 or b % 4 != 1:
                raise ValueError(f"({u} + {v}*sqrt({b}))/2 is not an algebraic integer")
        elif denom != 1:
            raise ValueError(f"denominator must be 1 or 2, got {denom}")
        return cls(u, v, denom, b)

    @classmethod
    def integer(cls, n: int, b: int) -> "QuadElem":
        return cls(n, 0, 1, b)

    def _same(self, other: "QuadElem") -> None:
        if self.b != other.b:
            raise ValueError(f"radicand mismatch: {self.b} vs {other.b}")

    def __mul__(self, other: "QuadElem") -> "QuadElem":
        if isinstance(other, int):
            return QuadElem.make(self.u * other, self.v * other, self.denom, self.b)
        self._same(other)
        u = self.u * other.u + self.b * self.v * other.v
        v = self.u * other.v + self.v * other.u
        d = self.denom * other.denom
        if d == 4:
            # product of two half-integral elements: numerator is divisible by 2
            return QuadElem.make(u // 2, v // 2, 2, self.b)
        return QuadElem.make(u, v, d, self.b)

    __rmul__ = __mul__

    def _scaled(self) -> tuple[int, int]:
        k = 2 // self.denom
        return self.u * k, self.v * k

    def __add__(self, other: "QuadElem") -> "QuadElem":
        self._same(other)
        (u1, v1), (u2, v2) = self._scaled(), other._scaled()
        return QuadElem.make(u1 + u2, v1 + v2, 2, self.b)

    def __neg__(self) -> "QuadElem":
        return QuadElem(-self.u, -self.v, self.denom, self.b)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        return self + (-other)

    def __pow__(self, n: int) -> "QuadElem":
        if n < 0:
            raise ValueError("negative powers: use inverse_unit")
        result = QuadElem.integer(1, self.b)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "QuadElem":
        return QuadElem(self.u, -self.v, self.denom, self.b)

    def norm(self) -> int:
        num = self.u * self.u - self.b * self.v * self.v
        return num // (self.denom * self.denom)

    def trace(self) -> int:
        return 2 * self.u // self.denom

    def inverse_unit(self) -> "QuadElem":
        """``1/self`` for a unit, i.e. ``norm * conj``."""
        n = self.norm()
        if n not in (1, -1):
            raise ValueError(f"{self} is not a unit (norm {n})")
        return self.conj() * n

    def sign(self) -> int:
        """Exact sign of ``u + v*sqrt(b)``."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if su == sv or sv == 0:
            return su
        if su == 0:
            return sv
        # opposite signs: compare u^2 against b v^2
        d = self.u * self.u - self.b * self.v * self.v
        return su if d > 0 else sv

    def gt_one(self) -> bool:
        return (self - QuadElem.integer(1, self.b)).sign() > 0

    def __float__(self) -> float:
        return (self.u + self.v * math.sqrt(self.b)) / self.denom

    def __str__(self) -> str:
        s = f"{self.u}{'+' if self.v >= 0 else '-'}{abs(self.v)}*sqrt({self.b})"
        return f"({s})/2" if self.denom == 2 else s


@dataclass(frozen=True)
class PellFundamental:
    z1: int
    x1: int
    b: int


def _floor_quadratic(P: int, Q: int, b: int) -> int:
    """floor((P + sqrt(b)) / Q) for non-square b and Q != 0."""
    s = math.isqrt(b)
    if Q > 0:
        return (P + s) // Q
    # Q < 0: (P + sqrt(b))/Q lies strictly between (P + s + 1)/Q and (P + s)/Q
    if (P + s) % -Q == 0:
        return (P + s) // Q - 1
    return (P + s) // Q


def quadratic_cf(P: int, Q: int, b: int) -> Iterator[tuple[int, int, int]]:
    """Partial quotients of (P + sqrt(b))/Q, yielding (a_k, P_k, Q_k).

    Needs ``Q | b - P*P`` so every complete quotient keeps the same shape.
    """
    if (b - P * P) % Q:
        raise ValueError("Q must divide b - P^2")
    while True:
        a = _floor_quadratic(P, Q, b)
        yield a, P, Q
        P = a * Q - P
        Q = (b - P * P) // Q


def fundamental_unit(b: int, max_terms: int = 10**6) -> QuadElem:
    """Smallest unit > 1 of Z[omega], omega = sqrt(b) or (1 + sqrt(b))/2.

    Walks the convergents p/q of omega; the unit is the first
    ``p - q*conj(omega)`` of norm +-1.
    """
    _check_radicand(b)
    half = b % 4 == 1
    P0, Q0 = (1, 2) if half else (0, 1)
    p0, p1 = 0, 1  # p_{-2}, p_{-1}
    q0, q1 = 1, 0
    for k, (a, _, _) in enumerate(quadratic_cf(P0, Q0, b)):
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        if half:
            eta = QuadElem.make(2 * p1 - q1, q1, 2, b)
        else:
            eta = QuadElem(p1, q1, 1, b)
        if eta.norm() in (1, -1) and eta.gt_one():
            return eta
        if k > max_terms:
            break
    raise RuntimeError(f"no unit found for b={b} within {max_terms} terms")


def pell_fundamental_solution(b: int) -> PellFundamental:
    """Minimal positive solution of z^2 - b x^2 = 1."""
    eps = fundamental_unit(b)
    power = eps
    # eps^6 always lies in Z[sqrt(b)] with norm +1
    for _ in range(6):
        if power.denom == 1 and power.norm() == 1:
            return PellFundamental(power.u, power.v, b)
        power = power * eps
    raise AssertionError("unreachable: eps^6 is a Pell solution")


def x_of_power(power: QuadElem, n: int, unit_norm: int) -> int | None:
    """x_n = (eps^n - eps^-n) / (2 sqrt(b)) given ``power == eps^n``.

    Integral exactly when eps^n has norm +1 and lies in Z[sqrt(b)], in which
    case it equals the sqrt(b)-coefficient.
    """
    if unit_norm ** (n % 2) != 1 or power.denom != 1:
        return None
    return power.v if power.v > 0 else None


def candidate_x(eps: QuadElem, n: int) -> int | None:
    if n < 1:
        raise ValueError("n must be positive")
    return x_of_power(eps**n, n, eps.norm())


class CandidateCursor:
    """Iterates eps^1, eps^2, ... yielding ``(n, eps^n, x_n or None)``."""

    def __init__(self, eps: QuadElem):
        self.eps = eps
        self.unit_norm = eps.norm()
        self.n = 0
        self.power = QuadElem.integer(1, eps.b)

    def __iter__(self) -> "CandidateCursor":
        return self

    def __next__(self) -> tuple[int, QuadElem, int | None]:
        self.n += 1
        self.power = self.power * self.eps
        return self.n, self.power, x_of_power(self.power, self.n, self.unit_norm)

    def advance_to(self, n: int) -> tuple[int, QuadElem, int | None]:
        if n < self.n:
            raise ValueError("cursor only moves forward")
        if n == self.n:
            return self.n, self.power, x_of_power(self.power, self.n, self.unit_norm)
        if n - self.n > 64:
            self.n = n - 1
            self.power = self.eps ** (n - 1)
        while self.n < n:
            out = next(self)
        return out
