"""Closed-form sizes of reduced coordinate sumsets and difference sets.

Prime-power counts come from the p = 2 and odd-p case splits; a general
modulus is handled by multiplicativity over its prime-power factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from operator import mul

from loguru import logger

from services.hyperbola_service import HyperbolaService, HyperbolaSpec
from utils.arith import PrimeFactorization, factorize, legendre, require_prime
from utils.exceptions import (
    EnumerationTooLargeError,
    InvariantViolationError,
    NotCoprimeError,
    PartialResultError,
    PreconditionError,
    UnsupportedPrimeError,
)


class SetKind(str, Enum):
    SUM = "sum"
    DIFFERENCE = "difference"


class CountMethod(str, Enum):
    CLOSED_FORM_P2 = "closed-form-p2"
    CLOSED_FORM_ODD_P = "closed-form-odd-p"
    SMALL_POWER_TABLE = "small-power-table"
    FULL_COVERAGE = "full-coverage-d>2"
    ORACLE = "oracle"


@dataclass(frozen=True)
class FactorCount:
    p: int
    t: int
    count: int
    method: CountMethod


@dataclass(frozen=True)
class CardinalityReport:
    spec: HyperbolaSpec
    per_factor: tuple[FactorCount, ...]
    total: int

    def __post_init__(self) -> None:
        if self.total != reduce(mul, (f.count for f in self.per_factor), 1):
            raise InvariantViolationError(f"total {self.total} is not the product of its factors")
        for f in self.per_factor:
            if f.method is CountMethod.FULL_COVERAGE and not (self.spec.d > 2 and f.p > 7):
                raise InvariantViolationError(f"full coverage claimed for d={self.spec.d}, p={f.p}")


@dataclass(frozen=True)
class RatioValue:
    """c_2(a;n) = #S_2(a;n) / #D_2(a;n), kept exact"""
    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.numerator < 1 or self.denominator < 1:
            raise InvariantViolationError(f"set sizes must be positive: {self.numerator}/{self.denominator}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def _integral(value: Fraction, label: str) -> int:
    if value.denominator != 1:
        raise InvariantViolationError(f"{label} evaluated to non-integer {value}")
    return value.numerator


def _two_adic_big(t: int) -> int:
    return _integral(Fraction(2 ** (t - 4), 3) + Fraction((-1) ** (t - 1), 3) + 3, f"2-adic count at t={t}")


def _odd_square_part(p: int, t: int) -> int:
    """#S''_2(a;p^t) when (a/p) = 1"""
    value = Fraction(p ** (t - 1), p + 1) + Fraction(3, 2) + Fraction((-1) ** (t - 1) * (p - 1), 2 * (p + 1))
    return _integral(value, f"S'' count at {p}^{t}")


def _small_two_power_sums(a: int, t: int) -> int:
    # t <= 4: 1, except 2 at 2^4 and at 2^3 when a = 1 mod 4
    if t == 4:
        return 2
    return 2 if t == 3 and a % 4 == 1 else 1


@lru_cache(maxsize=None)
def _prime_power_count(p: int, t: int, kind: SetKind, key: int) -> tuple[int, CountMethod]:
    # key is a mod 8 when p = 2 and (a/p) otherwise
    if p == 2:
        if t <= 4:
            a = key if kind is SetKind.SUM else -key
            return _small_two_power_sums(a, t), CountMethod.SMALL_POWER_TABLE
        if kind is SetKind.DIFFERENCE:
            branches = {7: _two_adic_big(t), 1: 2 ** (t - 3), 5: 2 ** (t - 3), 3: 2 ** (t - 4)}
        else:
            branches = {1: _two_adic_big(t), 3: 2 ** (t - 3), 7: 2 ** (t - 3), 5: 2 ** (t - 4)}
        return branches[key], CountMethod.CLOSED_FORM_P2

    symbol = key
    if kind is SetKind.DIFFERENCE and p % 4 == 3:
        # D(a;p^t) = S(-a;p^t) and (-1/p) = -1
        symbol = -symbol
    if symbol == 1:
        count = (p - 3) * p ** (t - 1) // 2 + _odd_square_part(p, t)
    else:
        count = (p - 1) * p ** (t - 1) // 2
    return count, CountMethod.CLOSED_FORM_ODD_P


class CardinalityService:
    @staticmethod
    def _check_prime_power(a: int, p: int, t: int) -> None:
        if t < 1:
            raise PreconditionError(f"exponent must be at least 1, got {t}")
        require_prime(p)
        if a % p == 0:
            raise NotCoprimeError(a, p, what="a and p")

    @staticmethod
    def card_S2_pp_with_method(a: int, p: int, t: int, kind: SetKind | str) -> tuple[int, CountMethod]:
        CardinalityService._check_prime_power(a, p, t)
        kind = SetKind(kind)
        key = a % 8 if p == 2 else legendre(a, p)
        return _prime_power_count(p, t, kind, key)

    @staticmethod
    def card_S2_pp(a: int, p: int, t: int, kind: SetKind | str) -> int:
        """Exact #S_2(a;p^t) (kind=sum) or #D_2(a;p^t) (kind=difference)"""
        return CardinalityService.card_S2_pp_with_method(a, p, t, kind)[0]

    @staticmethod
    def card_S2_components(a: int, p: int, t: int) -> tuple[int, int]:
        """(#S'_2, #S''_2): the k with k^2 - a a square coprime to p, resp. divisible by p"""
        if p == 2:
            raise UnsupportedPrimeError("S' and S'' are only defined for odd primes")
        CardinalityService._check_prime_power(a, p, t)
        if legendre(a, p) == -1:
            return (p - 1) * p ** (t - 1) // 2, 0
        return (p - 3) * p ** (t - 1) // 2, _odd_square_part(p, t)

    @staticmethod
    def card_signed_sumset(
        spec: HyperbolaSpec,
        budget: int | None = None,
        factorization: PrimeFactorization | None = None,
    ) -> CardinalityReport:
        """Size of S_d(m;a;n) as a product of prime-power counts.

        d = 2 uses the closed forms (m = 1 is the difference set, m = 0 and
        m = 2 share the sum count). For d > 2 a prime above 7 contributes
        p^t; smaller primes fall back to the oracle at that prime power.
        """
        if factorization is None:
            factorization = factorize(spec.n)
        computed: list[FactorCount] = []
        missing: list[tuple[int, int]] = []
        for p, t in factorization:
            if spec.d == 2:
                kind = SetKind.DIFFERENCE if spec.m == 1 else SetKind.SUM
                count, method = CardinalityService.card_S2_pp_with_method(spec.a, p, t, kind)
            elif p > 7:
                count, method = p**t, CountMethod.FULL_COVERAGE
            else:
                local = spec.with_modulus(p**t)
                try:
                    count = len(HyperbolaService.signed_sumset(local, budget=budget))
                except EnumerationTooLargeError as e:
                    logger.warning("oracle fallback skipped for {}: {}", local, e)
                    missing.append((p, t))
                    continue
                method = CountMethod.ORACLE
                logger.debug("oracle fallback for {} gave {}", local, count)
            computed.append(FactorCount(p, t, count, method))
        if missing:
            raise PartialResultError(computed, missing)
        total = reduce(mul, (f.count for f in computed), 1)
        return CardinalityReport(spec, tuple(computed), total)

    @staticmethod
    def ratio_pp(a: int, p: int, t: int) -> Fraction:
        """c_2(a;p^t)"""
        return Fraction(
            CardinalityService.card_S2_pp(a, p, t, SetKind.SUM),
            CardinalityService.card_S2_pp(a, p, t, SetKind.DIFFERENCE),
        )

    @staticmethod
    def ratio_c2(a: int, n: int, factorization: PrimeFactorization | None = None) -> RatioValue:
        """c_2(a;n) from the closed forms"""
        if n < 2:
            raise PreconditionError(f"modulus must be at least 2, got n={n}")
        if math.gcd(a, n) != 1:
            raise NotCoprimeError(a, n)
        if factorization is None:
            factorization = factorize(n)
        numerator = denominator = 1
        for p, t in factorization:
            numerator *= CardinalityService.card_S2_pp(a, p, t, SetKind.SUM)
            denominator *= CardinalityService.card_S2_pp(a, p, t, SetKind.DIFFERENCE)
        return RatioValue(numerator, denominator)

    @staticmethod
    def ratio_breakdown(a: int, factorization: PrimeFactorization) -> list[tuple[int, int, Fraction]]:
        return [(p, t, CardinalityService.ratio_pp(a, p, t)) for p, t in factorization]

    @staticmethod
    def ratio_3mod4_series(p: int, t: int) -> Fraction:
        """1 - 2 sum_{i < [t/2]} p^-(2i+1) + 2/phi(p^t), valid when (a/p) = 1"""
        require_prime(p)
        if p % 4 != 3:
            raise PreconditionError(f"expected a prime congruent to 3 mod 4, got {p}")
        if t < 1:
            raise PreconditionError(f"exponent must be at least 1, got {t}")
        series = sum((Fraction(1, p ** (2 * i + 1)) for i in range(t // 2)), Fraction(0))
        return 1 - 2 * series + Fraction(2, (p - 1) * p ** (t - 1))
