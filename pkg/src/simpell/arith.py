"""Exact big-integer helpers: square roots, square tests, factorization.

Everything here is pure integer arithmetic and safe to call from any number of
worker processes.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

TRIAL_BOUND = 10**6
MR_ROUNDS = 40
DEFAULT_BUDGET_MS = 5000

# deterministic Miller-Rabin witnesses, valid for n < 3.3e24
_DET_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DET_LIMIT = 3317044064679887385961981


def isqrt(n: int) -> int:
    """Largest r with r*r <= n."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def _residue_table(m: int) -> frozenset:
    return frozenset(i * i % m for i in range(m))


_SQ64 = _residue_table(64)
_SQ63 = _residue_table(63)
_SQ65 = _residue_table(65)
_SQ11 = _residue_table(11)


def is_perfect_square(n: int) -> int | None:
    """Return ``r`` with ``r*r == n`` if ``n`` is a square, else ``None``."""
    if n < 0:
        return None
    if n & 63 not in _SQ64:
        return None
    # one bignum reduction, then three cheap ones
    r = n % 45045  # 63 * 65 * 11
    if r % 63 not in _SQ63 or r % 65 not in _SQ65 or r % 11 not in _SQ11:
        return None
    s = math.isqrt(n)
    return s if s * s == n else None


# ---------------------------------------------------------------- primality

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_BOUND + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(TRIAL_BOUND) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, TRIAL_BOUND + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=1)
def _prime_blocks() -> tuple[tuple[int, tuple[int, ...]], ...]:
    # (product, primes) chunks so trial division is mostly a handful of gcds
    primes = _small_primes()
    size = 256
    out = []
    for i in range(0, len(primes), size):
        chunk = primes[i : i + size]
        out.append((math.prod(chunk), chunk))
    return tuple(out)


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, seed: int = 0) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, ``rounds`` random bases above."""
    if n < 2:
        return False
    for p in _DET_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DET_LIMIT:
        return all(_mr_round(n, d, s, a) for a in _DET_BASES)
    rng = random.Random(seed ^ n)
    bases = list(_DET_BASES) + [rng.randrange(2, n - 1) for _ in range(rounds)]
    return all(_mr_round(n, d, s, a) for a in bases)


# ---------------------------------------------------------------- factoring

@dataclass(frozen=True)
class Factorization:
    """``n == cofactor * prod(p**e for p, e in factors)``.

    ``cofactor`` is 1 when the factorization is complete; otherwise it is a
    composite with no prime factor below the trial-division bound.
    """

    n: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def value(self) -> int:
        return self.cofactor * math.prod(p**e for p, e in self.factors)


class IncompleteFactorization(ValueError):
    pass


class _Budget:
    def __init__(self, budget_ms: float | None):
        self.deadline = None if budget_ms is None else time.monotonic() + budget_ms / 1000

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


def _brent(n: int, budget: _Budget, rng: random.Random) -> int | None:
    """One nontrivial factor of composite odd ``n`` by Pollard-Brent rho."""
    while not budget.expired():
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if r > 1 << 26 or budget.expired():
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def _trial(n: int, counts: dict[int, int]) -> int:
    for prod, chunk in _prime_blocks():
        if n == 1:
            break
        if chunk[0] * chunk[0] > n:
            # n has no factor below chunk[0], so it is 1 or prime
            counts[n] = counts.get(n, 0) + 1
            return 1
        if math.gcd(n, prod) == 1:
            continue
        for p in chunk:
            while n % p == 0:
                n //= p
                counts[p] = counts.get(p, 0) + 1
    return n


def _split(n: int, counts: dict[int, int], leftovers: list[int], budget: _Budget,
           rng: random.Random, seed: int) -> None:
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m, seed=seed):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = is_perfect_square(m)
        if r is not None:
            stack += [r, r]
            continue
        d = _brent(m, budget, rng)
        if d is None:
            leftovers.append(m)
        else:
            stack += [d, m // d]


def factorize(n: int, budget_ms: float | None = DEFAULT_BUDGET_MS,
              parts: Sequence[int] | None = None, seed: int = 0) -> Factorization:
    """Factor ``n`` by trial division to 10**6 then Pollard-Brent.

    ``parts`` may hold known cofactors whose product is ``n`` (for example
    ``(x - 1, x + 1)`` when ``n = x*x - 1``); each is factored separately.
    Running out of budget leaves the unsplit remainder in ``cofactor``.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    if parts is None:
        parts = (n,)
    elif math.prod(parts) != n:
        raise ValueError("parts do not multiply to n")
    budget = _Budget(budget_ms)
    rng = random.Random(seed)
    counts: dict[int, int] = {}
    leftovers: list[int] = []
    for part in parts:
        rest = _trial(part, counts)
        if rest > 1:
            _split(rest, counts, leftovers, budget, rng, seed)
    return Factorization(n, tuple(sorted(counts.items())), math.prod(leftovers))


def factorize_x2m1(x: int, budget_ms: float | None = DEFAULT_BUDGET_MS, seed: int = 0) -> Factorization:
    """Factorization of ``x*x - 1`` via its halves ``x - 1`` and ``x + 1``."""
    if x < 2:
        raise ValueError("x*x - 1 must be positive")
    return factorize(x * x - 1, budget_ms, parts=(x - 1, x + 1), seed=seed)


def _require_complete(f: Factorization) -> None:
    if not f.complete:
        raise IncompleteFactorization(f"{f.n} has unfactored cofactor {f.cofactor}")


def squarefree_part(f: Factorization) -> int:
    """Product of the primes that divide ``f.n`` to an odd power."""
    _require_complete(f)
    return math.prod(p for p, e in f.factors if e % 2)


def square_divisors(f: Factorization) -> list[int]:
    """All ``d >= 1`` with ``d*d | f.n``, ascending."""
    _require_complete(f)
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**k for d in divs for k in range(e // 2 + 1)]
    return sorted(divs)


def rational_square_root(num: int, den: int) -> tuple[int, int] | None:
    """``(s, t)`` with ``(s/t)**2 == num/den`` in lowest terms, if it exists.

    Only positive squares count, so zero and negative ratios give ``None``.
    """
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    q = Fraction(num, den)
    if q <= 0:
        return None
    s = is_perfect_square(q.numerator)
    if s is None:
        return None
    t = is_perfect_square(q.denominator)
    if t is None:
        return None
    return s, t

