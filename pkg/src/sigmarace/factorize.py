"""Integer factorization: SPF tables, trial division, and Brent's rho.

A Factorization is the substrate for every multiplicative evaluation in the
package: an ordered list of (prime, exponent) pairs whose product is n, each
prime tagged 'proven' or 'probable' (see primes.prime_certainty).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, PartialFactorizationError, ResourceLimitError
from .primes import is_probable_prime, prime_certainty, small_primes

SPF_BUDGET = 200_000_000  # entries; int32 -> ~800 MB hard ceiling
DEFAULT_RHO_BUDGET = 4_000_000  # total rho iterations per factorize() call
DEFAULT_SEED = 0x5EED_60D


@dataclass(frozen=True)
class Factorization:
    """n = prod p^e with strictly increasing primes and per-prime certainty."""

    n: int
    factors: tuple[tuple[int, int], ...]
    certainty: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("factorizations are defined for n >= 1")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise DomainError("factors must be strictly increasing with e >= 1")
            last = p
            prod *= p ** e
        if prod != self.n:
            raise DomainError(f"factor product {prod} != n = {self.n}")
        if not self.certainty:
            object.__setattr__(
                self, "certainty", tuple(prime_certainty(p) for p, _ in self.factors)
            )

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def tau(self) -> int:
        t = 1
        for _, e in self.factors:
            t *= e + 1
        return t

    @property
    def fully_proven(self) -> bool:
        return all(c == "proven" for c in self.certainty)

    def divisors(self, cap: int = 1 << 20) -> list[int]:
        """All divisors, unsorted cartesian expansion; guarded by `cap`."""
        if self.tau > cap:
            raise ResourceLimitError(
                f"{self.tau} divisors exceed the enumeration cap {cap}"
            )
        divs = [1]
        for p, e in self.factors:
            pk = 1
            block = []
            for _ in range(e):
                pk *= p
                block.extend(d * pk for d in divs)
            divs.extend(block)
        return divs


def from_pairs(n: int, pairs) -> Factorization:
    return Factorization(n, tuple(sorted(pairs)))


@dataclass
class SpfTable:
    """Smallest-prime-factor array for 2 <= m <= limit."""

    limit: int
    spf: np.ndarray

    def smallest_factor(self, m: int) -> int:
        return int(self.spf[m])

    def covers(self, m: int) -> bool:
        return 2 <= m <= self.limit


def build_spf(limit: int, budget: int = SPF_BUDGET) -> SpfTable:
    """Vectorized SPF sieve. spf[m] = m iff m is prime."""
    if limit < 2:
        raise DomainError("SPF table needs limit >= 2")
    if limit > budget:
        raise ResourceLimitError(f"SPF limit {limit} exceeds budget {budget}")
    spf = np.zeros(limit + 1, dtype=np.int32 if limit < 2 ** 31 else np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            sl = spf[p::p]
            sl[sl == 0] = p
            if p * p > limit:
                # Every remaining unset entry is prime; finish in one pass.
                rest = spf[2:]
                unset = rest == 0
                rest[unset] = np.nonzero(unset)[0].astype(spf.dtype) + 2
                break
    return SpfTable(limit, spf)


def _factor_with_spf(n: int, table: SpfTable) -> list[tuple[int, int]]:
    out = []
    m = n
    spf = table.spf
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def _brent_rho(n: int, rng: random.Random, max_iter: int) -> tuple[int, int]:
    """One Brent-rho attempt; returns (factor, iterations_used).

    factor == n means the attempt failed (retry with new parameters).
    """
    if n % 2 == 0:
        return 2, 0
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    used = 0
    x = ys = y
    while g == 1 and used < max_iter:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            used += min(m, r - k)
            g = gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            used += 1
            if used >= max_iter:
                break
    return (g if 1 < g <= n else n), used


def factorize(
    n: int,
    table: SpfTable | None = None,
    budget: int = DEFAULT_RHO_BUDGET,
    seed: int = DEFAULT_SEED,
) -> Factorization:
    """Complete factorization of n >= 1.

    Uses the SPF table when it covers n, otherwise trial division by sieved
    primes followed by deterministic (seeded) Brent rho on the cofactors.
    Raises PartialFactorizationError carrying what was found if the rho
    budget runs out on a composite cofactor.
    """
    if n < 1:
        raise DomainError("factorize requires n >= 1")
    if n == 1:
        return Factorization(1, ())
    if table is not None and table.covers(n):
        return from_pairs(n, _factor_with_spf(n, table))

    counts: dict[int, int] = {}
    m = n
    for p in small_primes():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    if m > 1:
        if m < small_primes()[-1] ** 2 or is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            m = 1

    remaining = budget
    stack = [m] if m > 1 else []
    rng = random.Random((seed * 0x9E3779B97F4A7C15 + n) & (2 ** 64 - 1))
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_probable_prime(c):
            counts[c] = counts.get(c, 0) + 1
            continue
        root = isqrt(c)
        if root * root == c:
            stack.extend((root, root))
            continue
        f = c
        while f == c and remaining > 0:
            f, used = _brent_rho(c, rng, remaining)
            remaining -= max(used, 1)
        if f == c or f == 1:
            unresolved = c
            for rest in stack:
                unresolved *= rest
            raise PartialFactorizationError(
                n, tuple(sorted(counts.items())), unresolved
            )
        stack.extend((f, c // f))
    return from_pairs(n, sorted(counts.items()))


def factor_small(m: int) -> Factorization:
    """Convenience trial-division factorization for modest m (tests, tools)."""
    return factorize(m)
