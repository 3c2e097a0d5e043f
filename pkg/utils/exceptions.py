"""Exception hierarchy shared by the services and the command line"""

from __future__ import annotations


class ModHypError(Exception):
    """Base class for every error raised by this package"""


class PreconditionError(ModHypError, ValueError):
    """An argument violates a documented precondition"""


class NotCoprimeError(PreconditionError):
    """Two values that must be coprime share a factor"""

    def __init__(self, a: int, n: int, what: str = "a and n") -> None:
        self.a = a
        self.n = n
        super().__init__(f"{what} must be coprime, got gcd({a}, {n}) > 1")


class NotPrimeError(PreconditionError):
    def __init__(self, p: int, reason: str = "an odd prime") -> None:
        self.p = p
        super().__init__(f"expected {reason}, got {p}")


class UnsupportedPrimeError(ModHypError):
    """The requested operation is only defined for a narrower class of primes"""


class EnumerationTooLargeError(ModHypError):
    def __init__(self, tuples: int, budget: int) -> None:
        self.tuples = tuples
        self.budget = budget
        super().__init__(
            f"enumeration needs phi(n)^(d-1) = {tuples} tuples, budget is {budget}"
        )


class PartialResultError(ModHypError):
    """Some prime-power factors could not be computed within the budget"""

    def __init__(self, computed: list, missing: list[tuple[int, int]]) -> None:
        self.computed = computed
        self.missing = missing
        labels = ", ".join(f"{p}^{t}" for p, t in missing)
        super().__init__(f"oracle fallback exceeds the budget for {labels}")


class InvariantViolationError(ModHypError):
    """A result that must hold mathematically did not"""


class ConfigurationError(ModHypError):
    pass
