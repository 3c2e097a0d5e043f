"""Dominance scans, density estimates, primorial growth, d > 2 coverage and
the constructive sum-product solver.

Asymptotic statements (growth like log log N, limsup/liminf) can only be
checked at desk scale; the reports here expose the finite quantities and
leave the qualitative thresholds to the caller.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Iterator

from loguru import logger
from sympy import primerange

from services.cardinality_service import CardinalityService
from services.hyperbola_service import HyperbolaService, HyperbolaSpec, ResidueSet
from utils.arith import (
    PrimeFactorization,
    factorize,
    factorize_with_sieve,
    legendre,
    primes_3_mod_4,
    require_prime,
    smallest_prime_factors,
    sqrt_mod_pp,
)
from utils.exceptions import (
    InvariantViolationError,
    NotCoprimeError,
    PreconditionError,
    UnsupportedPrimeError,
)
from utils.settings import get_settings

DENSITY_PRIME_CUTOFF = 10**5
# n values per worker task in the parallel scans
SCAN_CHUNK = 20_000


class Classification(str, Enum):
    SUM_DOMINANT = "sum-dominant"
    DIFFERENCE_DOMINANT = "difference-dominant"
    BALANCED = "balanced"

    @classmethod
    def of(cls, c2: Fraction) -> Classification:
        if c2 > 1:
            return cls.SUM_DOMINANT
        if c2 < 1:
            return cls.DIFFERENCE_DOMINANT
        return cls.BALANCED


@dataclass(frozen=True)
class DominanceReport:
    a: int
    n: int
    c2: Fraction
    classification: Classification
    factor_breakdown: tuple[tuple[int, int, Fraction], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.classification is not Classification.of(self.c2):
            raise InvariantViolationError(f"c2 = {self.c2} cannot be {self.classification.value}")


@dataclass(frozen=True)
class DominanceScan:
    a: int
    n_max: int
    threshold: Fraction
    reports: tuple[DominanceReport, ...]
    skipped: int

    def __iter__(self) -> Iterator[DominanceReport]:
        return iter(self.reports)

    def __len__(self) -> int:
        return len(self.reports)

    @property
    def above_threshold(self) -> int:
        return sum(1 for r in self.reports if r.c2 > self.threshold)


@dataclass(frozen=True)
class Extremes:
    a: int
    n_max: int
    max_c2: Fraction
    argmax: int
    min_c2: Fraction
    argmin: int


@dataclass(frozen=True)
class DensityReport:
    a: int
    x: int
    L: Fraction
    e_a_count: int
    c_a_count: int
    empirical_density: Fraction
    k_a: Fraction
    bound: float
    rigorous_bound: float
    prime_cutoff: int = DENSITY_PRIME_CUTOFF
    residue_sign: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.empirical_density <= 1:
            raise InvariantViolationError(f"density {self.empirical_density} outside [0, 1]")
        if self.k_a not in K_A_VALUES:
            raise InvariantViolationError(f"unexpected K_a {self.k_a}")


@dataclass(frozen=True)
class PrimorialRow:
    k: int
    N_k: int
    c2: Fraction
    c2_power: Fraction
    log_log: float


@dataclass(frozen=True)
class PrimorialReport:
    a: int
    t: int
    rows: tuple[PrimorialRow, ...]


@dataclass(frozen=True)
class CoverageReport:
    spec: HyperbolaSpec
    covered: bool
    missing: ResidueSet
    theorem_applies: bool

    def __post_init__(self) -> None:
        if self.theorem_applies and (not self.covered or len(self.missing)):
            raise InvariantViolationError(
                f"{self.spec}: every prime factor exceeds 7 but {len(self.missing)} residues are missing"
            )


K_A_VALUES = (Fraction(1), Fraction(63, 64), Fraction(31, 32), Fraction(15, 16))


def k_a_constant(a: int) -> Fraction:
    if a % 2 == 0:
        return Fraction(1)
    if a % 8 == 1:
        return Fraction(63, 64)
    if a % 8 == 5:
        return Fraction(31, 32)
    return Fraction(15, 16)


def _dominance_chunk(a: int, lo: int, hi: int) -> tuple[list[DominanceReport], int]:
    spf = smallest_prime_factors(hi)
    reports: list[DominanceReport] = []
    skipped = 0
    for n in range(lo, hi + 1):
        if math.gcd(a, n) != 1:
            skipped += 1
            continue
        breakdown = tuple(CardinalityService.ratio_breakdown(a, factorize_with_sieve(n, spf)))
        c2 = reduce(mul, (r for _, _, r in breakdown), Fraction(1))
        reports.append(DominanceReport(a, n, c2, Classification.of(c2), breakdown))
    return reports, skipped


def _in_e_a(a: int, factorization: PrimeFactorization) -> bool:
    return all(p % 4 != 3 or legendre(a, p) == 1 for p in factorization.primes)


def _density_chunk(a: int, lo: int, hi: int, threshold: Fraction) -> tuple[int, int]:
    spf = smallest_prime_factors(hi)
    e_count = c_count = 0
    for n in range(lo, hi + 1):
        if math.gcd(a, n) != 1:
            continue
        factorization = factorize_with_sieve(n, spf)
        if not _in_e_a(a, factorization):
            continue
        e_count += 1
        if CardinalityService.ratio_c2(a, n, factorization).value > threshold:
            c_count += 1
    return e_count, c_count


def _ranges(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    return [(start, min(start + size - 1, hi)) for start in range(lo, hi + 1, size)]


class AnalysisService:
    @staticmethod
    def dominance_scan(
        a: int,
        n_max: int,
        L: Fraction = Fraction(1),
        workers: int | None = None,
    ) -> DominanceScan:
        """One closed-form report per n in [2, n_max] coprime to a, ascending in n"""
        workers = get_settings().threads if workers is None else workers
        chunks = _ranges(2, n_max, SCAN_CHUNK)
        if workers <= 1 or len(chunks) <= 1:
            results = [_dominance_chunk(a, lo, hi) for lo, hi in chunks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                # map keeps submission order, so n stays ascending
                results = list(executor.map(_dominance_chunk, *zip(*[(a, lo, hi) for lo, hi in chunks])))
        reports = tuple(r for chunk, _ in results for r in chunk)
        skipped = sum(s for _, s in results)
        if skipped:
            logger.info("dominance scan for a={} skipped {} moduli sharing a factor with a", a, skipped)
        return DominanceScan(a, n_max, Fraction(L), reports, skipped)

    @staticmethod
    def extremes(a: int, n_max: int, workers: int | None = None) -> Extremes:
        """Largest and smallest c_2(a;n) over 2 <= n <= n_max (first n on ties)"""
        scan = AnalysisService.dominance_scan(a, n_max, workers=workers)
        if not scan.reports:
            raise PreconditionError(f"no modulus in [2, {n_max}] is coprime to {a}")
        top = max(scan.reports, key=lambda r: (r.c2, -r.n))
        bottom = min(scan.reports, key=lambda r: (r.c2, r.n))
        return Extremes(a, n_max, top.c2, top.n, bottom.c2, bottom.n)

    @staticmethod
    def two_prime_prediction(a: int, p: int, q: int, t: int, s: int) -> Classification:
        """Dominance of H_2(a; p^t q^s) predicted for primes p < q, both 3 mod 4.

        For t >= 2 a square mod p gives difference dominance and a non-square
        sum dominance; with t = 1 the two outcomes swap.
        """
        for prime in (p, q):
            require_prime(prime)
            if prime % 4 != 3:
                raise PreconditionError(f"expected primes congruent to 3 mod 4, got {prime}")
        if not p < q:
            raise PreconditionError(f"expected p < q, got p={p}, q={q}")
        if t < 1 or s < 1:
            raise PreconditionError(f"exponents must be positive, got t={t}, s={s}")
        if math.gcd(a, p * q) != 1:
            raise NotCoprimeError(a, p * q)
        square = legendre(a, p) == 1
        if t == 1:
            square = not square
        return Classification.DIFFERENCE_DOMINANT if square else Classification.SUM_DOMINANT

    @staticmethod
    def density_report(
        a: int,
        x: int,
        L: Fraction = Fraction(1),
        residue_sign: int = 1,
        workers: int | None = None,
    ) -> DensityReport:
        """Share of n in E_a(x) with c_2(a;n) > L, next to the K_a lower bound.

        residue_sign = -1 flips the Legendre condition defining E_a and counts
        c_2(a;n) < 1/L instead; by the reflection lemma this is the report
        for -a.
        """
        if a == 0:
            raise PreconditionError("density needs a nonzero a")
        if x < 2:
            raise PreconditionError(f"scan bound must be at least 2, got {x}")
        if residue_sign not in (1, -1):
            raise PreconditionError(f"residue_sign must be 1 or -1, got {residue_sign}")
        L = Fraction(L)
        b = a * residue_sign
        workers = get_settings().threads if workers is None else workers

        chunks = _ranges(2, x, SCAN_CHUNK)
        if workers <= 1 or len(chunks) <= 1:
            counts = [_density_chunk(b, lo, hi, L) for lo, hi in chunks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                counts = list(executor.map(_density_chunk, *zip(*[(b, lo, hi, L) for lo, hi in chunks])))
        e_count = sum(e for e, _ in counts)
        c_count = sum(c for _, c in counts)

        k_a = k_a_constant(b)
        product = math.prod(
            1.0 - 1.0 / (p * p)
            for p in primerange(3, DENSITY_PRIME_CUTOFF + 1)
            if p % 4 == 3 and legendre(b, p) == 1
        )
        bound = float(k_a) * product
        # the omitted factors multiply to more than 1 - sum_{k > P} k^-2 > 1 - 1/P
        rigorous = bound * (1.0 - 1.0 / DENSITY_PRIME_CUTOFF)
        density = Fraction(c_count, e_count) if e_count else Fraction(0)
        return DensityReport(a, x, L, e_count, c_count, density, k_a, bound, rigorous,
                             DENSITY_PRIME_CUTOFF, residue_sign)

    @staticmethod
    def primorial_series(a: int, k_max: int, t: int = 2) -> PrimorialReport:
        """c_2(a;N_k) and c_2(a;N_k^t) for N_k the product of the first k primes = 3 mod 4"""
        if k_max < 1:
            raise PreconditionError(f"k_max must be positive, got {k_max}")
        if t < 2:
            raise PreconditionError(f"exponent must be at least 2, got t={t}")
        if a < 1 or math.isqrt(a) ** 2 != a:
            raise PreconditionError(f"a must be a perfect square, got {a}")
        primes = primes_3_mod_4(k_max)
        for p in primes:
            if a % p == 0:
                raise NotCoprimeError(a, p, what=f"a and the primorial prime {p}")
        rows: list[PrimorialRow] = []
        for k in range(1, k_max + 1):
            head = primes[:k]
            n_k = math.prod(head)
            c2 = CardinalityService.ratio_c2(a, n_k, PrimeFactorization(n_k, tuple((p, 1) for p in head)))
            powered = PrimeFactorization(n_k**t, tuple((p, t) for p in head))
            c2_power = CardinalityService.ratio_c2(a, n_k**t, powered)
            rows.append(PrimorialRow(k, n_k, c2.value, c2_power.value, math.log(math.log(n_k))))
        return PrimorialReport(a, t, tuple(rows))

    @staticmethod
    def coverage_check(spec: HyperbolaSpec, budget: int | None = None, workers: int | None = None) -> CoverageReport:
        """Exhaustively find the residues missing from S_d(m;a;n), d >= 3"""
        if spec.d < 3:
            raise PreconditionError(f"coverage is a d >= 3 question, got d={spec.d}")
        attained = HyperbolaService.signed_sumset(spec, budget=budget, workers=workers)
        least = factorize(spec.n).least_prime()
        return CoverageReport(
            spec=spec,
            covered=len(attained) == spec.n,
            missing=attained.complement(),
            theorem_applies=least is not None and least > 7,
        )

    @staticmethod
    def solve_sum_product(b: int, a: int, p: int, t: int) -> tuple[int, int, int]:
        """Units x1, x2, x3 mod p^t with x1 + x2 + x3 = b and x1 x2 x3 = a.

        Writing x2 = 1/y, the system becomes x^2 + x(1/y - b) + a y = 0 with
        discriminant R(y)/y^2, R(y) = -4a y^3 + b^2 y^2 - 2b y + 1. The first y
        in 1..p-1 with R(y) a nonzero square mod p yields a root that lifts.
        """
        require_prime(p)
        if p <= 7:
            raise UnsupportedPrimeError(f"the sum-product system needs p > 7, got p={p}")
        if t < 1:
            raise PreconditionError(f"exponent must be at least 1, got {t}")
        if a % p == 0:
            raise NotCoprimeError(a, p, what="a and p")
        q = p**t
        a, b = a % q, b % q
        half = pow(2, -1, q)
        for y in range(1, p):
            r = (-4 * a * y**3 + b * b * y * y - 2 * b * y + 1) % p
            if r == 0 or legendre(r, p) != 1:
                continue
            y_inv = pow(y, -1, q)
            disc = (-4 * a * y**3 + b * b * y * y - 2 * b * y + 1) * y_inv * y_inv % q
            root = sqrt_mod_pp(disc, p, t)[0]
            x1 = (b - y_inv + root) * half % q
            x2 = y_inv
            x3 = (b - x1 - x2) % q
            if (x1 + x2 + x3 - b) % q or (x1 * x2 * x3 - a) % q:
                raise InvariantViolationError(f"triple {(x1, x2, x3)} fails substitution mod {q}")
            logger.debug("solved b={} a={} mod {} with y={}", b, a, q, y)
            return x1, x2, x3
        raise InvariantViolationError(f"no y in 1..{p - 1} makes R(y) a nonzero square mod {p}")
