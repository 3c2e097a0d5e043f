"""Brute-force oracle for modular hyperbolas and their signed sumsets.

H_d(a;n) is every d-tuple of residues in [1, n) whose product is a mod n.
The first d-1 coordinates range over the units mod n; the last one is
forced, so |H_d(a;n)| = phi(n)^(d-1).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np
from loguru import logger

from utils.exceptions import EnumerationTooLargeError, NotCoprimeError, PreconditionError
from utils.settings import get_settings

# below this many tuples a sumset is built on the calling thread
PARALLEL_THRESHOLD = 1 << 18


@dataclass(frozen=True)
class HyperbolaSpec:
    """A hyperbola H_d(a;n) plus the sign pattern of S_d(m;a;n).

    The first m coordinates are added and the remaining d - m subtracted.
    m = 0 (every sign negative) is accepted as a natural extension.
    """
    d: int
    m: int
    a: int
    n: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise PreconditionError(f"dimension must be at least 2, got d={self.d}")
        if not 0 <= self.m <= self.d:
            raise PreconditionError(f"plus-sign count must lie in [0, {self.d}], got m={self.m}")
        if self.n < 2:
            raise PreconditionError(f"modulus must be at least 2, got n={self.n}")
        if math.gcd(self.a, self.n) != 1:
            raise NotCoprimeError(self.a, self.n)
        object.__setattr__(self, "a", self.a % self.n)

    @classmethod
    def sums(cls, a: int, n: int) -> HyperbolaSpec:
        return cls(2, 2, a, n)

    @classmethod
    def differences(cls, a: int, n: int) -> HyperbolaSpec:
        return cls(2, 1, a, n)

    @property
    def signs(self) -> tuple[int, ...]:
        return (1,) * self.m + (-1,) * (self.d - self.m)

    def with_modulus(self, n: int) -> HyperbolaSpec:
        """The same sign pattern over a divisor modulus (a reduced into it)"""
        return HyperbolaSpec(self.d, self.m, self.a % n, n)

    def __str__(self) -> str:
        return f"S_{self.d}({self.m};{self.a};{self.n})"


class ResidueSet:
    """A subset of Z/nZ stored as a packed bit array with a cached size"""

    __slots__ = ("modulus", "bits", "cardinality")

    def __init__(self, modulus: int, bits: np.ndarray) -> None:
        self.modulus = modulus
        self.bits = bits
        self.bits.flags.writeable = False
        self.cardinality = int(np.bitwise_count(bits).sum())

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> ResidueSet:
        return cls(mask.size, np.packbits(mask.astype(bool)))

    @classmethod
    def from_values(cls, values: Iterable[int], modulus: int) -> ResidueSet:
        mask = np.zeros(modulus, dtype=bool)
        idx = np.fromiter((v % modulus for v in values), dtype=np.int64)
        mask[idx] = True
        return cls.from_mask(mask)

    def to_mask(self) -> np.ndarray:
        return np.unpackbits(self.bits, count=self.modulus).astype(bool)

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, value: object) -> bool:
        if not isinstance(value, (int, np.integer)) or not 0 <= value < self.modulus:
            return False
        v = int(value)
        return bool((self.bits[v >> 3] >> (7 - (v & 7))) & 1)

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in np.flatnonzero(self.to_mask()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.modulus, self.bits.tobytes()))

    def __or__(self, other: ResidueSet) -> ResidueSet:
        if self.modulus != other.modulus:
            raise PreconditionError("cannot merge residue sets with different moduli")
        return ResidueSet(self.modulus, np.bitwise_or(self.bits, other.bits))

    def negated(self) -> ResidueSet:
        """{-x mod n : x in self}"""
        mask = self.to_mask()
        return ResidueSet.from_mask(mask[(-np.arange(self.modulus)) % self.modulus])

    def complement(self) -> ResidueSet:
        return ResidueSet.from_mask(~self.to_mask())

    def to_list(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"ResidueSet(modulus={self.modulus}, cardinality={self.cardinality})"


@lru_cache(maxsize=64)
def _unit_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Units mod n (ascending) and an inverse table indexed by residue"""
    units = np.flatnonzero(np.gcd(np.arange(n, dtype=np.int64), n) == 1).astype(np.int64)
    inverse = np.zeros(n, dtype=np.int64)
    for x in units.tolist():
        inverse[x] = pow(x, -1, n)
    units.flags.writeable = False
    inverse.flags.writeable = False
    return units, inverse


def _mask_for_lead(spec: HyperbolaSpec, lead: np.ndarray) -> np.ndarray:
    # every point whose first coordinate lies in `lead`
    n, d, a = spec.n, spec.d, spec.a
    signs = spec.signs
    units, inverse = _unit_table(n)
    mask = np.zeros(n, dtype=bool)
    if d == 2:
        last = a * inverse[lead] % n
        mask[(signs[0] * lead + signs[1] * last) % n] = True
        return mask
    inv_units = inverse[units]
    for x1 in lead.tolist():
        for tail in itertools.product(units.tolist(), repeat=d - 3):
            prefix = (x1, *tail)
            product = 1
            partial = 0
            for sign, x in zip(signs, prefix):
                product = product * x % n
                partial += sign * x
            scale = a * int(inverse[product]) % n
            last = scale * inv_units % n
            mask[(partial + signs[d - 2] * units + signs[d - 1] * last) % n] = True
    return mask


class HyperbolaService:
    @staticmethod
    def point_count(spec: HyperbolaSpec) -> int:
        """|H_d(a;n)| = phi(n)^(d-1)"""
        units, _ = _unit_table(spec.n)
        return units.size ** (spec.d - 1)

    @staticmethod
    def check_budget(spec: HyperbolaSpec, budget: int | None = None) -> int:
        budget = get_settings().budget if budget is None else budget
        tuples = HyperbolaService.point_count(spec)
        if tuples > budget:
            raise EnumerationTooLargeError(tuples, budget)
        return tuples

    @staticmethod
    def enumerate_points(spec: HyperbolaSpec, budget: int | None = None) -> Iterator[tuple[int, ...]]:
        """Stream H_d(a;n) in lexicographic order of the first d-1 coordinates"""
        HyperbolaService.check_budget(spec, budget)
        return HyperbolaService._stream(spec)

    @staticmethod
    def _stream(spec: HyperbolaSpec) -> Iterator[tuple[int, ...]]:
        n, a = spec.n, spec.a
        units, inverse = _unit_table(n)
        for head in itertools.product(units.tolist(), repeat=spec.d - 1):
            product = 1
            for x in head:
                product = product * x % n
            yield (*head, a * int(inverse[product]) % n)

    @staticmethod
    def collect_points(spec: HyperbolaSpec, budget: int | None = None) -> list[tuple[int, ...]]:
        return list(HyperbolaService.enumerate_points(spec, budget))

    @staticmethod
    def planar_points(a: int, n: int, budget: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates of H_2(a;n) as two aligned arrays, ordered by x"""
        spec = HyperbolaSpec.sums(a, n)
        HyperbolaService.check_budget(spec, budget)
        units, inverse = _unit_table(n)
        return units.copy(), spec.a * inverse[units] % n

    @staticmethod
    def signed_sumset(
        spec: HyperbolaSpec,
        budget: int | None = None,
        workers: int | None = None,
    ) -> ResidueSet:
        """The exact set S_d(m;a;n) = {+-x_1 +- ... +- x_d mod n}.

        The leading coordinate range is split into chunks; each chunk fills a
        private mask and the masks are merged by union, so the result does
        not depend on how chunks are scheduled.
        """
        tuples = HyperbolaService.check_budget(spec, budget)
        workers = get_settings().threads if workers is None else workers
        units, _ = _unit_table(spec.n)
        if workers <= 1 or tuples < PARALLEL_THRESHOLD or units.size < 2:
            return ResidueSet.from_mask(_mask_for_lead(spec, units))

        chunks = np.array_split(units, min(workers, units.size))
        logger.debug("{}: {} tuples over {} chunks", spec, tuples, len(chunks))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            masks = list(executor.map(lambda lead: _mask_for_lead(spec, lead), chunks))
        return ResidueSet.from_mask(np.logical_or.reduce(masks))

    @staticmethod
    def unreduced_sum_diff(a: int, n: int, budget: int | None = None) -> tuple[frozenset[int], frozenset[int]]:
        """Integer sets S_2(a;n) and D_2(a;n), without reduction mod n"""
        x, y = HyperbolaService.planar_points(a, n, budget)
        sums = frozenset(int(v) for v in np.unique(x + y))
        diffs = frozenset(int(v) for v in np.unique(x - y))
        return sums, diffs

    @staticmethod
    def unreduced_ratio(a: int, n: int, budget: int | None = None) -> Fraction:
        """#S_2(a;n) / #D_2(a;n) for the unreduced sets"""
        sums, diffs = HyperbolaService.unreduced_sum_diff(a, n, budget)
        return Fraction(len(sums), len(diffs))
