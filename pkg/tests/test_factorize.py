"""Factorization: SPF tables, trial division + rho, certainty flags."""

import pytest

from conftest import brute_divisors
from sigmarace.errors import DomainError, PartialFactorizationError, ResourceLimitError
from sigmarace.factorize import (
    Factorization,
    build_spf,
    factorize,
    from_pairs,
)
from sigmarace.primes import PROVEN_LIMIT, is_probable_prime, next_prime


def test_build_spf_small_entries():
    t = build_spf(10)
    assert t.smallest_factor(9) == 3
    assert t.smallest_factor(7) == 7
    assert t.smallest_factor(8) == 2


def test_build_spf_more_entries():
    t = build_spf(100)
    assert t.smallest_factor(91) == 7
    t30 = build_spf(30)
    assert t30.smallest_factor(30) == 2


def test_build_spf_is_correct_everywhere():
    t = build_spf(5000)
    for m in range(2, 5001):
        p = t.smallest_factor(m)
        assert m % p == 0
        assert all(m % r != 0 for r in range(2, p))
        assert (p == m) == is_probable_prime(m)


def test_build_spf_budget():
    with pytest.raises(ResourceLimitError):
        build_spf(10 ** 7, budget=10 ** 6)


def test_factorize_basics():
    assert factorize(360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(1).factors == ()
    assert factorize(1).tau == 1


def test_factorize_rejects_zero():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorize_spec_value_against_trial_oracle():
    n = 30 * 2338703 + 1
    # Oracle: plain trial division.
    m, fs = n, []
    d = 2
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e:
            fs.append((d, e))
        d += 1
    if m > 1:
        fs.append((m, 1))
    assert factorize(n).factors == tuple(fs)


def test_factorize_uses_table_when_covering():
    t = build_spf(1000)
    f = factorize(840, table=t)
    assert f.factors == ((2, 3), (3, 1), (5, 1), (7, 1))


def test_factorize_large_semiprime_with_rho():
    p, q = next_prime(10 ** 9), next_prime(2 * 10 ** 9)
    f = factorize(p * q)
    assert f.factors == ((p, 1), (q, 1))


def test_factorize_deterministic():
    n = next_prime(10 ** 10) * next_prime(3 * 10 ** 10)
    assert factorize(n, seed=7).factors == factorize(n, seed=7).factors


def test_partial_factorization_error_carries_findings():
    p = next_prime(10 ** 19)
    q = next_prime(2 * 10 ** 19)
    with pytest.raises(PartialFactorizationError) as err:
        factorize(4 * p * q, budget=2)
    assert dict(err.value.found).get(2) == 2
    assert err.value.cofactor == p * q


def test_certainty_flags():
    f = factorize(2 ** 3 * 97)
    assert f.certainty == ("proven", "proven")
    assert f.fully_proven
    big = next_prime(PROVEN_LIMIT)
    fb = Factorization(big, ((big, 1),))
    assert fb.certainty == ("probable",)


def test_factorization_validation():
    with pytest.raises(DomainError):
        Factorization(10, ((2, 1), (3, 1)))
    with pytest.raises(DomainError):
        Factorization(4, ((2, 0),))
    with pytest.raises(DomainError):
        from_pairs(12, [(3, 1), (2, 2), (3, 0)])


def test_divisors_match_brute_force():
    for n in (1, 2, 36, 360, 97, 1024):
        assert sorted(factorize(n).divisors()) == brute_divisors(n)


def test_divisor_cap():
    f = factorize(2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29)
    with pytest.raises(ResourceLimitError):
        f.divisors(cap=100)
