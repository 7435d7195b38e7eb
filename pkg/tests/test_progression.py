"""Streamed progression factorization vs pointwise factorize + sigma_s."""

import random

import pytest

from sigmarace.errors import DomainError, ResourceLimitError
from sigmarace.factorize import factorize
from sigmarace.numerics import Exponent, value_bounds
from sigmarace.progression import (
    ProgressionSpec,
    SieveContext,
    factor_chunk,
    scan_progression,
)
from sigmarace.sigma import sigma_s


def collect(prog, n_lo, n_hi, s, **kw):
    got = {}
    summary = scan_progression(
        prog, n_lo, n_hi, s, sink=lambda n, v: got.__setitem__(n, v), **kw
    )
    return got, summary


def test_scan_30n_plus_1_first_values():
    got, summary = collect(ProgressionSpec(30, 1), 1, 5, Exponent(1))
    assert {n: v.value for n, v in got.items()} == {
        1: 32, 2: 62, 3: 112, 4: 133, 5: 152,
    }
    assert summary.count == 5


def test_scan_tau_of_2n():
    got, _ = collect(ProgressionSpec(2, 0), 1, 3, Exponent(0))
    assert {n: v.value for n, v in got.items()} == {1: 2, 2: 3, 3: 4}


def test_single_n_matches_pointwise():
    prog = ProgressionSpec(7, 3)
    got, _ = collect(prog, 41, 41, Exponent(1))
    assert got[41] == sigma_s(factorize(7 * 41 + 3), Exponent(1))


def test_scan_matches_pointwise_random_spot_checks():
    rng = random.Random(1234)
    prog = ProgressionSpec(6, 1)
    got, _ = collect(prog, 1, 20_000, Exponent(1))
    for _ in range(100):
        n = rng.randrange(1, 20_001)
        assert got[n] == sigma_s(factorize(6 * n + 1), Exponent(1)), n


def test_scan_fractional_matches_pointwise():
    prog = ProgressionSpec(30, 0)
    got, _ = collect(prog, 1, 300, Exponent(1, 2))
    rng = random.Random(99)
    for _ in range(40):
        n = rng.randrange(1, 301)
        direct = sigma_s(factorize(30 * n), Exponent(1, 2))
        glo, ghi = value_bounds(got[n])
        dlo, dhi = value_bounds(direct)
        assert glo <= dhi and dlo <= ghi


def test_factor_chunk_residuals_are_prime_or_one():
    from sigmarace.primes import is_probable_prime

    prog = ProgressionSpec(30, 1)
    ctx = SieveContext(prog, 5_000)
    chunk = factor_chunk(prog, 1, 5_001, ctx)
    for i, r in enumerate(chunk.residuals):
        assert r == 1 or is_probable_prime(r)
        value = chunk.members[i]
        for p, e in chunk.smalls[i]:
            assert value % p ** e == 0 and value % p ** (e + 1) != 0
        rebuilt = r
        for p, e in chunk.smalls[i]:
            rebuilt *= p ** e
        assert rebuilt == value


def test_factor_chunk_slope_sharing_prime():
    # a = 30 shares primes 2, 3, 5 with every member when b = 0.
    prog = ProgressionSpec(30, 0)
    ctx = SieveContext(prog, 100)
    chunk = factor_chunk(prog, 1, 101, ctx)
    for i in range(100):
        primes = dict(chunk.smalls[i])
        assert 2 in primes and 3 in primes and 5 in primes


def test_progression_validation():
    with pytest.raises(DomainError):
        ProgressionSpec(0, 1)
    with pytest.raises(DomainError):
        ProgressionSpec(2, -1)
    with pytest.raises(DomainError):
        scan_progression(ProgressionSpec(1, 0), 0, 5, Exponent(1))


def test_scan_value_budget_error_names_feasible_split():
    with pytest.raises(ResourceLimitError) as err:
        scan_progression(
            ProgressionSpec(10, 0), 1, 10 ** 6, Exponent(1), value_budget=10 ** 5
        )
    assert "10000" in str(err.value)
