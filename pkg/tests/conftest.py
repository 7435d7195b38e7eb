import random
from fractions import Fraction

import pytest


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpmath mpf."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def brute_sigma(n: int, s: int = 1) -> int:
    return sum(d ** s for d in range(1, n + 1) if n % d == 0)


def brute_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]
