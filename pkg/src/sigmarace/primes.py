"""Prime generation, strong-probable-prime testing, and AP prime search.

The Miller-Rabin battery over the first 13 prime bases is a proven primality
test below 3.317e24; larger inputs keep the same verdict but are flagged
"probable" (an extended fixed base set is used there). Everything is fully
deterministic.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache
from math import gcd, isqrt

from .errors import BudgetExhaustedError, DomainError

# Deterministic below this bound with the 13-base battery.
PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981
_CORE_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_BASES = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by a bytearray sieve."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


@lru_cache(maxsize=8)
def _cached_primes(limit: int) -> tuple[int, ...]:
    return tuple(sieve_primes(limit))


def small_primes(limit: int = 1 << 16) -> tuple[int, ...]:
    """Cached prime tuple; rounds the limit up to a power of two."""
    cap = 1 << max(4, (limit - 1).bit_length())
    return _cached_primes(cap)


def _strong_test(n: int, base: int) -> bool:
    if base % n == 0:
        return True
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Deterministic strong-probable-prime battery (proven below 3.3e24)."""
    if n < 2:
        return False
    for p in _CORE_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    bases = _CORE_BASES if n < PROVEN_LIMIT else _CORE_BASES + _EXTRA_BASES
    return all(_strong_test(n, b) for b in bases)


def prime_certainty(n: int) -> str:
    """'proven' when the battery is a primality proof for n, else 'probable'."""
    return "proven" if n < PROVEN_LIMIT else "probable"


def next_prime(n: int) -> int:
    """Smallest (probable) prime strictly greater than n."""
    c = max(n + 1, 2)
    if c > 2 and c % 2 == 0:
        c += 1
    while not is_probable_prime(c):
        c += 1 if c == 2 else 2
    return c


def nth_prime(k: int) -> int:
    """The k-th prime, 1-indexed (p_1 = 2)."""
    if k < 1:
        raise DomainError("prime index must be >= 1")
    limit = 16
    while True:
        ps = small_primes(limit)
        if len(ps) >= k:
            return ps[k - 1]
        limit *= 4


def prime_index_range(lo_exclusive: int, primes: tuple[int, ...]) -> int:
    return bisect_right(primes, lo_exclusive)


def find_prime_in_ap(
    A: int, B: int, lower: int = 0, budget: int = 500_000
) -> tuple[int, int]:
    """Smallest t >= 1 with A + B*t a (probable) prime exceeding `lower`.

    Requires gcd(A, B) = 1 and B >= 1 (Dirichlet guarantees existence).
    Returns (t, A + B*t). Raises BudgetExhaustedError after `budget`
    candidates.
    """
    if B < 1:
        raise DomainError("progression step must be >= 1")
    if gcd(A, B) != 1:
        raise DomainError(f"gcd({A}, {B}) != 1: no primes guaranteed in this progression")
    t = 1
    if A + B <= lower:
        t = (lower - A) // B + 1
    value = A + B * t
    for _ in range(budget):
        if is_probable_prime(value):
            return t, value
        t += 1
        value += B
    raise BudgetExhaustedError(
        f"no prime of the form {A}+{B}t above {lower} within {budget} candidates"
    )
