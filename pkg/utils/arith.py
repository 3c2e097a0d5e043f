"""Exact modular arithmetic used by every service.

Factorization, CRT, Legendre symbols, squareness tests, square roots and
square counts modulo prime powers. All functions are pure; Python integers
are unbounded, so CRT products of two 64-bit moduli never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterator, Sequence

import numpy as np
from sympy import isprime

from utils.exceptions import (
    InvariantViolationError,
    NotCoprimeError,
    NotPrimeError,
    PreconditionError,
)

TRIAL_DIVISION_LIMIT = 10**6

_is_prime = lru_cache(maxsize=None)(isprime)


@dataclass(frozen=True)
class PrimeFactorization:
    """Canonical factorization n = prod p^e with strictly increasing primes"""
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PreconditionError(f"n must be positive, got {self.n}")
        product = 1
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1 or not _is_prime(p):
                raise PreconditionError(f"not a canonical factorization of {self.n}: {self.factors}")
            previous = p
            product *= p**e
        if product != self.n:
            raise PreconditionError(f"factors {self.factors} multiply to {product}, not {self.n}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.factors]

    def least_prime(self) -> int | None:
        return self.factors[0][0] if self.factors else None


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise PreconditionError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise PreconditionError(f"{self.value} is not reduced mod {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> ResidueClass:
        """Build a residue class, reducing value into [0, modulus)"""
        if modulus < 1:
            raise PreconditionError(f"modulus must be positive, got {modulus}")
        return cls(value % modulus, modulus)

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


# ---------- factorization ----------

def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n"""
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        m = 128
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
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InvariantViolationError(f"Pollard rho found no factor of {n}")


def _factor_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if isprime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _factor_large(d, out)
    _factor_large(n // d, out)


def factorize(n: int) -> PrimeFactorization:
    """Factor n by trial division up to 10^6, then Pollard-Brent rho.

    >>> factorize(360).factors
    ((2, 3), (3, 2), (5, 1))
    """
    if n < 1:
        raise PreconditionError(f"factorize needs n >= 1, got {n}")
    found: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m and d <= TRIAL_DIVISION_LIMIT:
        while m % d == 0:
            found[d] = found.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        _factor_large(m, found)
    return PrimeFactorization(n, tuple(sorted(found.items())))


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Sieve of smallest prime factors for 0..limit (entries 0 and 1 are 0)"""
    spf = np.zeros(max(limit, 1) + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] != 0:
            continue
        idx = np.arange(p * p, limit + 1, p)
        fresh = idx[spf[idx] == 0]
        spf[fresh] = p
    rest = np.arange(spf.size)
    unset = (spf == 0) & (rest >= 2)
    spf[unset] = rest[unset]
    return spf


def factorize_with_sieve(n: int, spf: np.ndarray) -> PrimeFactorization:
    """Same result as factorize, reading smallest prime factors from a sieve"""
    if n < 1:
        raise PreconditionError(f"factorize needs n >= 1, got {n}")
    if n >= spf.size:
        return factorize(n)
    found: list[tuple[int, int]] = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        found.append((p, e))
    return PrimeFactorization(n, tuple(found))


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def mod_inverse(a: int, n: int) -> int:
    try:
        return pow(a, -1, n)
    except ValueError as e:
        raise NotCoprimeError(a, n) from e


def primes_3_mod_4(count: int) -> list[int]:
    """The first `count` primes congruent to 3 mod 4"""
    found: list[int] = []
    candidate = 3
    while len(found) < count:
        if isprime(candidate):
            found.append(candidate)
        candidate += 4
    return found


# ---------- CRT ----------

def crt_combine(residues: Sequence[ResidueClass]) -> ResidueClass:
    """Combine congruences with pairwise coprime moduli into one class.

    >>> str(crt_combine([ResidueClass(1, 4), ResidueClass(2, 9)]))
    '29 mod 36'
    """
    def step(acc: ResidueClass, nxt: ResidueClass) -> ResidueClass:
        if math.gcd(acc.modulus, nxt.modulus) != 1:
            raise NotCoprimeError(acc.modulus, nxt.modulus, what="CRT moduli")
        m = acc.modulus * nxt.modulus
        # acc.value + acc.modulus * k = nxt.value (mod nxt.modulus)
        k = (nxt.value - acc.value) * pow(acc.modulus, -1, nxt.modulus) % nxt.modulus
        return ResidueClass((acc.value + acc.modulus * k) % m, m)

    return reduce(step, residues, ResidueClass(0, 1))


# ---------- quadratic residues ----------

@lru_cache(maxsize=4096)
def require_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not _is_prime(p):
        raise NotPrimeError(p)


@lru_cache(maxsize=4096)
def require_prime(p: int) -> None:
    if not _is_prime(p):
        raise NotPrimeError(p, reason="a prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion; p must be an odd prime"""
    require_odd_prime(p)
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def split_power(a: int, p: int) -> tuple[int, int]:
    """Write a nonzero a as p^s * u with p not dividing u"""
    s = 0
    while a % p == 0:
        a //= p
        s += 1
    return s, a


def _is_unit_square(u: int, p: int, r: int) -> bool:
    # u coprime to p; is u a square mod p^r?
    if p == 2:
        if r == 1:
            return True
        if r == 2:
            return u % 4 == 1
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def is_square_mod_pp(a: int, p: int, t: int) -> bool:
    """True iff x^2 = a (mod p^t) is solvable; a need not be coprime to p"""
    if t < 1:
        raise PreconditionError(f"exponent must be at least 1, got {t}")
    require_prime(p)
    a %= p**t
    if a == 0:
        return True
    s, u = split_power(a, p)
    if s % 2 == 1:
        return False
    return _is_unit_square(u, p, t - s)


def _tonelli_shanks(a: int, p: int) -> int:
    # a is a nonzero quadratic residue mod the odd prime p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, t2i = 0, t
        while t2i != 1:
            t2i = t2i * t2i % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def sqrt_mod_pp(a: int, p: int, t: int) -> list[int]:
    """All x in [0, p^t) with x^2 = a (mod p^t), ascending; gcd(a, p) must be 1.

    Odd p: Tonelli-Shanks mod p, then Newton lifting. p = 2: the explicit
    t <= 3 conditions, then the classical bit-by-bit lift.
    """
    if t < 1:
        raise PreconditionError(f"exponent must be at least 1, got {t}")
    require_prime(p)
    if a % p == 0:
        raise NotCoprimeError(a, p, what="a and p")
    q = p**t
    a %= q
    if p == 2:
        if t == 1:
            return [1]
        if t == 2:
            return [1, 3] if a % 4 == 1 else []
        if a % 8 != 1:
            return []
        r = 1
        for k in range(3, t):
            # r^2 = a mod 2^k; fix bit k-1 so that it holds mod 2^(k+1)
            if ((r * r - a) >> k) & 1:
                r += 1 << (k - 1)
        half = q >> 1
        return sorted({r % q, -r % q, (r + half) % q, (half - r) % q})
    if pow(a % p, (p - 1) // 2, p) != 1:
        return []
    r = _tonelli_shanks(a % p, p)
    modulus = p
    for _ in range(1, t):
        modulus *= p
        r = (r - (r * r - a) * pow(2 * r, -1, modulus)) % modulus
    if (r * r - a) % q:
        raise InvariantViolationError(f"lifted root {r} is not a square root of {a} mod {q}")
    return sorted({r, q - r})


def _unit_square_count(p: int, r: int) -> int:
    if r == 0:
        return 1
    if p == 2:
        return 1 if r <= 2 else 2 ** (r - 3)
    return (p - 1) * p ** (r - 1) // 2


def count_squares_mod_pp(p: int, t: int) -> int:
    """Number of distinct k^2 mod p^t over all residues k.

    Every nonzero square is p^(2j) times a unit square mod p^(t-2j), so the
    count is 1 (for zero) plus the unit-square counts at each even valuation.
    """
    if t < 1:
        raise PreconditionError(f"exponent must be at least 1, got {t}")
    require_prime(p)
    return 1 + sum(_unit_square_count(p, t - s) for s in range(0, t, 2))


def stangl_count(p: int, t: int) -> int:
    """Closed-form number of squares mod p^t"""
    if p == 2:
        value = Fraction(2 ** (t - 1), 3) + Fraction((-1) ** (t - 1), 6) + Fraction(3, 2)
    else:
        value = (
            Fraction(p ** (t + 1), 2 * (p + 1))
            + Fraction((-1) ** (t - 1) * (p - 1), 4 * (p + 1))
            + Fraction(3, 4)
        )
    if value.denominator != 1:
        raise InvariantViolationError(f"square count for {p}^{t} is not integral: {value}")
    return int(value)
