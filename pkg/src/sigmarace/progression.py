"""Streaming factorization of arithmetic progressions a*n + b.

Members of the progression are factored chunk by chunk: for every sieve prime
p the indices it divides form a sub-progression, so full exponents are
extracted with one pass per prime. What remains per member is 1 or a single
prime above the sieve bound. This is pointwise identical to factorize() and
is what every large scan in the package runs on.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable

from .errors import DomainError, ResourceLimitError
from .numerics import DEFAULT_PREC, Exponent, ScalarValue
from .primes import sieve_primes
from .sigma import sigma_from_pairs

DEFAULT_SEGMENT = 1 << 22  # integers of value range per chunk
MAX_CHUNK_MEMBERS = 1 << 17
SIEVE_VALUE_BUDGET = 10 ** 14


@dataclass(frozen=True)
class ProgressionSpec:
    """The map n -> a*n + b with a >= 1, b >= 0."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise DomainError("progression slope a must be >= 1")
        if self.b < 0:
            raise DomainError("progression offset b must be >= 0")

    def value(self, n: int) -> int:
        return self.a * n + self.b


@dataclass
class FactorChunk:
    """Factor data for members a*n+b, n in [n0, n0 + len(members))."""

    n0: int
    members: list[int]
    smalls: list[list[tuple[int, int]]]
    residuals: list[int]


class SieveContext:
    """Sieve primes (and inverses mod p of the slope) shared across chunks."""

    def __init__(self, prog: ProgressionSpec, n_hi: int):
        self.prog = prog
        max_value = prog.value(n_hi)
        self.primes = sieve_primes(isqrt(max_value))
        self.invs = [
            0 if prog.a % p == 0 else pow(prog.a, -1, p) for p in self.primes
        ]


def factor_chunk(prog: ProgressionSpec, n0: int, n1: int, ctx: SieveContext) -> FactorChunk:
    """Factor members for n in [n0, n1); residuals are 1 or a single prime."""
    if n0 < 1:
        raise DomainError("progressions are scanned from n = 1")
    a, b = prog.a, prog.b
    cnt = n1 - n0
    members = list(range(a * n0 + b, a * n1 + b, a))
    res = members.copy()
    smalls: list[list[tuple[int, int]]] = [[] for _ in range(cnt)]
    top = isqrt(members[-1])
    for pi, p in enumerate(ctx.primes):
        if p > top:
            break
        if a % p == 0:
            if b % p != 0:
                continue
            i0, step = 0, 1
        else:
            i0 = ((-b) * ctx.invs[pi] - n0) % p
            step = p
        for i in range(i0, cnt, step):
            m = res[i] // p
            e = 1
            while m % p == 0:
                m //= p
                e += 1
            res[i] = m
            smalls[i].append((p, e))
    return FactorChunk(n0, members, smalls, res)


def iter_chunks(n_lo: int, n_hi: int, chunk_members: int):
    n0 = n_lo
    while n0 <= n_hi:
        n1 = min(n0 + chunk_members, n_hi + 1)
        yield n0, n1
        n0 = n1


def chunk_members_for(a: int, segment_size: int = DEFAULT_SEGMENT) -> int:
    return max(1024, min(MAX_CHUNK_MEMBERS, segment_size // a))


@dataclass(frozen=True)
class ScanSummary:
    count: int
    n_lo: int
    n_hi: int


def scan_progression(
    prog: ProgressionSpec,
    n_lo: int,
    n_hi: int,
    s: Exponent,
    prec: int = DEFAULT_PREC,
    sink: Callable[[int, ScalarValue], None] | None = None,
    segment_size: int = DEFAULT_SEGMENT,
    value_budget: int = SIEVE_VALUE_BUDGET,
) -> ScanSummary:
    """Deliver (n, sigma_s(a*n+b)) for every n in [n_lo, n_hi] to `sink`."""
    if n_lo < 1 or n_hi < n_lo:
        raise DomainError("need 1 <= n_lo <= n_hi")
    if prog.value(n_hi) > value_budget:
        feasible = (value_budget - prog.b) // prog.a
        raise ResourceLimitError(
            f"progression value {prog.value(n_hi)} exceeds the sieve budget "
            f"{value_budget}; largest feasible n_hi is {feasible} "
            f"(split into ranges of at most that many terms)"
        )
    ctx = SieveContext(prog, n_hi)
    count = 0
    for n0, n1 in iter_chunks(n_lo, n_hi, chunk_members_for(prog.a, segment_size)):
        chunk = factor_chunk(prog, n0, n1, ctx)
        for i in range(n1 - n0):
            pairs = chunk.smalls[i]
            r = chunk.residuals[i]
            if r > 1:
                pairs = pairs + [(r, 1)]
            value = sigma_from_pairs(chunk.members[i], pairs, s, prec)
            if sink is not None:
                sink(n0 + i, value)
            count += 1
    return ScanSummary(count, n_lo, n_hi)
