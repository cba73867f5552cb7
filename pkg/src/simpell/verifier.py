"""Full uniqueness check of x^2 - a y^2 = 1, z^2 - b x^2 = 1 for one b.

For a fixed b the search proceeds in four steps:

1. bound the exponent n of the smaller solution by c_n1 (continued fraction
   of log(sqrt b)/log(eps) against the Matveev bound c_m);
2. for every candidate x_n with n <= c_n1 that can solve both equations,
   bound the exponent of a second solution with a reduction step for every
   admissible power l;
3. scan the remaining range and test whether (x_n'^2 - 1)/(x_n^2 - 1) is a
   rational square;
4. rebuild all (a, y, y', z, z') for every pair that passes.

Any step that cannot be certified marks the report ``not_certified``; it is
never reported as unique.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    Factorization,
    factorize_x2m1,
    is_perfect_square,
    rational_square_root,
    square_divisors,
    squarefree_part,
)
from .bounds import (
    BoundSet,
    ReductionInstance,
    compute_bounds,
    compute_c_l,
    compute_c_n2_initial,
    reduce_adaptive,
)
from .quadfield import CandidateCursor, QuadElem, fundamental_unit, pell_fundamental_solution
from .realcf import CertifiedReal, UncertifiedExpansion, log_gamma, log_quad, log_sqrt

UNIQUE = "unique_certified"
PAIRS = "pairs_found"
NOT_CERTIFIED = "not_certified"

SKIP_NON_INTEGRAL = "non-integral"
SKIP_TOO_SMALL = "x <= sqrt(1+b)"
SKIP_NOT_PELL = "1+b*x^2 not a square"


@dataclass(frozen=True)
class Config:
    precision_bits: int = 192
    precision_ceiling_bits: int = 1 << 15
    factor_budget_ms: int = 5000
    scan_cap: int = 10**7
    seed: int = 0
    reduction_terms: int = 400

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class CandidateRecord:
    n: int
    x: int | None
    skipped: str | None = None
    z: int | None = None
    factorization: Factorization | None = None
    pi: int | None = None
    pi_fallback: bool = False
    c_l: int | None = None
    log_gamma: CertifiedReal | None = None
    c_n2: int | None = None


@dataclass
class ReductionRecord:
    n: int
    l: int
    initial_bound: int
    bound: int | None
    q_k: int | None = None
    kappa: Fraction | None = None
    reason: str = "ok"


@dataclass(frozen=True)
class Recovered:
    a: int
    y: int
    y_prime: int
    z: int
    z_prime: int


@dataclass
class SolutionPair:
    n: int
    n_prime: int
    x: int
    x_prime: int
    recovered: list[Recovered] = field(default_factory=list)
    partial: bool = False


@dataclass
class VerificationReport:
    b: int
    status: str = UNIQUE
    reason: str | None = None
    epsilon: QuadElem | None = None
    bounds: BoundSet | None = None
    candidates: list[CandidateRecord] = field(default_factory=list)
    reductions: list[ReductionRecord] = field(default_factory=list)
    pairs: list[SolutionPair] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)

    def fail(self, reason: str) -> None:
        # a found pair still wins over a later certification failure
        if self.status != PAIRS:
            self.status = NOT_CERTIFIED
        self.reason = reason if self.reason is None else f"{self.reason}; {reason}"

    @property
    def kept(self) -> list[CandidateRecord]:
        return [c for c in self.candidates if c.skipped is None]


class _Timer:
    def __init__(self, sink: dict[str, float]):
        self.sink = sink

    def __call__(self, name: str) -> "_Timer":
        self.name = name
        return self

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.sink[self.name] = self.sink.get(self.name, 0.0) + 1000 * (time.perf_counter() - self.t0)


class _XTable:
    """x_n for n = 1, 2, ... computed once along a single cursor."""

    def __init__(self, eps: QuadElem):
        self.cursor = CandidateCursor(eps)
        self.xs: list[int | None] = [None]

    def __getitem__(self, n: int) -> int | None:
        while len(self.xs) <= n:
            self.xs.append(next(self.cursor)[2])
        return self.xs[n]


def skip_reason(b: int, x: int | None) -> tuple[str | None, int | None]:
    """Why x_n cannot be the x of a solution, or ``(None, z)`` if it can."""
    if x is None:
        return SKIP_NON_INTEGRAL, None
    if x * x <= 1 + b:
        return SKIP_TOO_SMALL, None
    z = is_perfect_square(1 + b * x * x)
    if z is None:
        return SKIP_NOT_PELL, None
    return None, z


def recover_solutions(b: int, x: int, x_prime: int, f: Factorization,
                      f_prime: Factorization | None = None) -> list[Recovered]:
    """All (a, y, y', z, z') with x^2 - a y^2 = 1 = x'^2 - a y'^2."""
    z = is_perfect_square(1 + b * x * x)
    z_prime = is_perfect_square(1 + b * x_prime * x_prime)
    if z is None or z_prime is None:
        return []
    m, m_prime = x * x - 1, x_prime * x_prime - 1
    out = []
    for d in square_divisors(f):
        a = m // (d * d)
        if a <= 1 or m_prime % a:
            continue
        y_prime = is_perfect_square(m_prime // a)
        if y_prime is not None:
            out.append(Recovered(a, d, y_prime, z, z_prime))
    return out


def _reduce_candidate(report: VerificationReport, cand: CandidateRecord, config: Config) -> int | None:
    """Largest certified bound on the exponent of a second solution, or None."""
    bs = report.bounds
    b = report.b
    best = 0
    for l in range(1, cand.c_l + 1):
        lg = cand.log_gamma
        init = compute_c_n2_initial(l, bs.c_m, lg, bs.c1, b, bs.log_eps)
        # the variable of the reduction is l*n2 < l*c_n2(l) + 1
        N = l * init + 1

        def make(prec: int, l=l, N=N) -> ReductionInstance:
            lg_p = log_gamma(cand.x, prec)
            le_p = log_quad(report.epsilon, prec)
            c1 = CertifiedReal.exact(bs.c1, prec)
            return ReductionInstance(
                mu=le_p / lg_p,
                tau=-(log_sqrt(b, prec) * l) / lg_p,
                prefactor=(c1 * c1 * b + c1) * l / lg_p,
                decay=le_p * 2 / l,
                N=N,
            )

        red, reason = reduce_adaptive(make, config.precision_bits, config.precision_ceiling_bits,
                                      initial_bound=N, max_terms=config.reduction_terms)
        if red is not None:
            n2_bound = red.bound // l
            report.reductions.append(ReductionRecord(cand.n, l, init, n2_bound, red.q, red.kappa))
        else:
            fallback = init // l
            report.reductions.append(ReductionRecord(cand.n, l, init, None, reason=reason))
            if fallback - cand.n > config.scan_cap:
                report.fail(f"reduction failed for n={cand.n}, l={l} ({reason})")
                return None
            n2_bound = fallback
        best = max(best, n2_bound)
    return best


def verify_b(b: int, config: Config | None = None) -> VerificationReport:
    """Run the whole search for one b and return the report."""
    config = config or Config()
    report = VerificationReport(b)
    timer = _Timer(report.timings_ms)
    t_start = time.perf_counter()
    try:
        _verify(report, config, timer)
    finally:
        report.timings_ms["total"] = 1000 * (time.perf_counter() - t_start)
    return report


def _verify(report: VerificationReport, config: Config, timer: _Timer) -> None:
    b = report.b
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    if b == 1:
        report.reason = "z^2 - x^2 = 1 has no positive solutions"
        return
    if is_perfect_square(b) is not None:
        report.reason = "square radicand: z^2 - b x^2 = 1 forces x = 0"
        return

    with timer("unit"):
        eps = fundamental_unit(b)
    report.epsilon = eps
    with timer("bounds"):
        try:
            bs = compute_bounds(b, eps, config.precision_bits, config.precision_ceiling_bits)
        except UncertifiedExpansion as exc:
            report.fail(f"bounds: {exc}")
            return
    report.bounds = bs

    xs = _XTable(eps)
    with timer("candidates"):
        for n in range(1, bs.c_n1 + 1):
            x = xs[n]
            reason, z = skip_reason(b, x)
            cand = CandidateRecord(n, x, reason, z)
            report.candidates.append(cand)
            if reason is not None:
                continue
            f = factorize_x2m1(x, config.factor_budget_ms, seed=config.seed)
            cand.factorization = f
            cand.log_gamma = log_gamma(x, bs.prec)
            if f.complete:
                cand.pi = squarefree_part(f)
                squarefree = all(e == 1 for _, e in f.factors)
                cand.c_l = 1 if squarefree else compute_c_l(cand.log_gamma, cand.pi)
            else:
                # a >= Pi >= 1 still holds, so Pi = 1 gives a valid (weaker) c_l
                cand.pi, cand.pi_fallback = 1, True
                cand.c_l = compute_c_l(cand.log_gamma, 1)

    for cand in report.kept:
        with timer("reductions"):
            c_n2 = _reduce_candidate(report, cand, config)
        if c_n2 is None:
            continue
        cand.c_n2 = c_n2
        with timer("scan"):
            _scan(report, cand, xs, c_n2)


def _scan(report: VerificationReport, cand: CandidateRecord, xs: _XTable, c_n2: int) -> None:
    b = report.b
    m = cand.x * cand.x - 1
    for n_prime in range(cand.n + 1, c_n2 + 1):
        x_prime = xs[n_prime]
        reason, _ = skip_reason(b, x_prime)
        if reason is not None:
            continue
        if rational_square_root(x_prime * x_prime - 1, m) is None:
            continue
        pair = SolutionPair(cand.n, n_prime, cand.x, x_prime)
        if cand.factorization.complete:
            pair.recovered = recover_solutions(b, cand.x, x_prime, cand.factorization)
        else:
            pair.partial = True
        report.pairs.append(pair)
        report.status = PAIRS


# ------------------------------------------------------------------ oracle

def brute_force_oracle(b: int, x_max: int, method: str = "scan") -> list[tuple[int, int]]:
    """All (z, x) with z^2 - b x^2 = 1 and 1 <= x <= x_max.

    ``method="scan"`` tests 1 + b x^2 for squareness directly (residue sieve in
    numpy, exact check on survivors); ``method="recurrence"`` powers the
    minimal solution.
    """
    if is_perfect_square(b) is not None:
        raise ValueError(f"{b} is a square")
    if method == "recurrence":
        fund = pell_fundamental_solution(b)
        z, x = fund.z1, fund.x1
        out = []
        while x <= x_max:
            out.append((z, x))
            z, x = fund.z1 * z + b * fund.x1 * x, fund.x1 * z + fund.z1 * x
        return out
    out = []
    chunk = 1 << 18
    for start in range(1, x_max + 1, chunk):
        xv = np.arange(start, min(start + chunk, x_max + 1), dtype=np.int64)
        keep = np.ones(xv.shape, dtype=bool)
        for mod in (64, 63, 65, 11, 17, 19, 23):
            squares = np.zeros(mod, dtype=bool)
            squares[(np.arange(mod) ** 2) % mod] = True
            r = (1 + (b % mod) * ((xv % mod) ** 2 % mod)) % mod
            keep &= squares[r]
        for x in xv[keep].tolist():
            z = is_perfect_square(1 + b * x * x)
            if z is not None:
                out.append((z, x))
    return out
