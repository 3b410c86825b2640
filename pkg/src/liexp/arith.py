"""Exact p-adic valuation helpers.

Everything here works on Python ints; inputs are capped at ``MAX_INPUT`` so
that trial division stays instant and nothing silently grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_INPUT = 10**9


def _guard(x: int, what: str) -> None:
    if x > MAX_INPUT:
        raise OverflowError(f"{what}={x} exceeds supported bound {MAX_INPUT}")


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, order=True)
class OddPrime:
    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError(f"prime must be an int, got {self.p!r}")
        _guard(self.p, "p")
        if self.p == 2:
            raise ValueError("p = 2 is not supported; p must be an odd prime")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def q(self) -> int:
        """Dimension gap of the alpha_1 attaching maps, 2p - 2."""
        return 2 * self.p - 2

    def __int__(self) -> int:
        return self.p

    def __index__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)

    @classmethod
    def of(cls, p: "OddPrime | int") -> "OddPrime":
        return p if isinstance(p, OddPrime) else _cached_prime(p)


@lru_cache(maxsize=None)
def _cached_prime(p: int) -> OddPrime:
    return OddPrime(p)


def nu(p: OddPrime | int, n: int) -> int:
    """Exponent of ``p`` in ``n``."""
    p = OddPrime.of(p).p
    if n == 0:
        raise ValueError("nu(p, 0) is infinite")
    n = abs(n)
    _guard(n, "n")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def nu_factorial(p: OddPrime | int, m: int) -> int:
    """Exponent of ``p`` in ``m!`` by Legendre's formula."""
    p = OddPrime.of(p).p
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    _guard(m, "m")
    total = 0
    power = p
    while power <= m:
        total += m // power
        power *= p
    return total


def choose2(a: int) -> int:
    # Clamped to 0 below 2 so the large-n bound formula stays total.
    return a * (a - 1) // 2 if a >= 2 else 0
