"""Integer kernel: primes, factorization, and multiplicative functions.

Everything here is exact integer arithmetic.  All returned values are
immutable and safe to share between concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Factorization",
    "PrimeTable",
    "sieve_primes",
    "primes_upto",
    "prime_array",
    "factorize",
    "divisors",
    "euler_phi",
    "mobius",
    "lcm",
    "is_cubefree",
]

# Plain sieve below this limit, segmented above (keeps memory bounded for
# the large-N end of the sweep harness).
_PLAIN_SIEVE_LIMIT = 10_000_000
_SEGMENT_SIZE = 1 << 20


def _plain_sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            step_count = (limit - p * p) // p + 1
            flags[p * p :: p] = bytes(step_count)
    return [i for i in range(2, limit + 1) if flags[i]]


def _segmented_sieve(limit: int) -> list[int]:
    base = _plain_sieve(math.isqrt(limit))
    primes = list(base)
    low = math.isqrt(limit) + 1
    while low <= limit:
        high = min(low + _SEGMENT_SIZE - 1, limit)
        flags = bytearray([1]) * (high - low + 1)
        for p in base:
            start = max(p * p, ((low + p - 1) // p) * p)
            if start > high:
                continue
            flags[start - low :: p] = bytes((high - start) // p + 1)
        primes.extend(low + i for i, f in enumerate(flags) if f)
        low = high + 1
    return primes


# Growing module-level prime cache: recomputed only when a larger limit is
# requested, sliced views handed out otherwise.
_cached_limit = 0
_cached_primes: np.ndarray = np.empty(0, dtype=np.int64)


def prime_array(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (shared read-only view)."""
    global _cached_limit, _cached_primes
    if limit < 2:
        raise ValueError("prime limit must be >= 2")
    if limit > _cached_limit:
        target = max(limit, 1000)
        raw = _plain_sieve(target) if target <= _PLAIN_SIEVE_LIMIT else _segmented_sieve(target)
        _cached_primes = np.asarray(raw, dtype=np.int64)
        _cached_primes.setflags(write=False)
        _cached_limit = target
    return _cached_primes[: int(np.searchsorted(_cached_primes, limit, side="right"))]


def primes_upto(limit: int) -> tuple[int, ...]:
    """All primes <= limit as a tuple."""
    return tuple(int(p) for p in prime_array(limit))


@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, ascending."""

    limit: int
    primes: tuple[int, ...]

    def count(self) -> int:
        return len(self.primes)


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes; segmented above 10^7 to bound memory."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    return PrimeTable(limit=limit, primes=primes_upto(limit))


@dataclass(frozen=True)
class Factorization:
    """Canonical prime-power decomposition, primes strictly ascending."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def phi(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= (p - 1) * p ** (e - 1)
        return out

    def mobius(self) -> int:
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1

    def is_cubefree(self) -> bool:
        return all(e < 3 for _, e in self.factors)

    def radical(self) -> int:
        out = 1
        for p, _ in self.factors:
            out *= p
        return out

    def divisor_list(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**j for d in divs for j in range(e + 1)]
        divs.sort()
        return divs


def factorize(n: int) -> Factorization:
    """Trial division over the prime table up to sqrt(n); n = 1 is empty."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n == 1:
        return Factorization(n=1, factors=())
    factors = []
    rest = n
    root = math.isqrt(n)
    if root >= 2:
        for p in prime_array(root):
            p = int(p)
            if p * p > rest:
                break
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                factors.append((p, e))
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n=n, factors=tuple(factors))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    return factorize(n).divisor_list()


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi requires n >= 1")
    return factorize(n).phi()


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius requires n >= 1")
    return factorize(n).mobius()


def lcm(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise ValueError("lcm requires positive arguments")
    return math.lcm(a, b)


def is_cubefree(n: int) -> bool:
    if n < 1:
        raise ValueError("is_cubefree requires n >= 1")
    return factorize(n).is_cubefree()
