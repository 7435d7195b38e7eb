"""Theorem calculators: ratio bounds, dominance criteria, sign-change params."""

import random
from fractions import Fraction

import mpmath
import pytest

from conftest import mpf_to_fraction
from sigmarace.errors import DomainError
from sigmarace.factorize import factorize
from sigmarace.numerics import Exponent, value_bounds
from sigmarace.race import Direction, RaceSpec, sign_at
from sigmarace.sigma import sigma_s
from sigmarace.theorems import (
    always_less_check,
    always_less_check_sumform,
    bounds_ad_eq_bc,
    dominance_eventual,
    dominance_s0,
    global_bounds_large_s,
    ratio_extremes,
    thmA_min_d,
    thmA_part2_params,
)

mpmath.mp.dps = 50


# ---------------------------------------------------------------------------
# ad = bc ratio bounds


def test_bounds_2_0_4_0():
    bounds, r1, r2 = bounds_ad_eq_bc(2, 0, 4, 0, Exponent(1))
    assert (r1, r2) == (2, 1)
    assert bounds.lo.value == Fraction(1, 3)
    assert bounds.hi.value == Fraction(1, 2)
    # sigma(2)/sigma(4) = 3/7 lies inside
    assert Fraction(1, 3) <= Fraction(3, 7) <= Fraction(1, 2)


def test_bounds_identity_pair():
    bounds, r1, r2 = bounds_ad_eq_bc(3, 5, 3, 5, Exponent(2))
    assert (r1, r2) == (1, 1)
    assert bounds.lo.value == bounds.hi.value == 1


def test_bounds_3_6_1_2_tau():
    bounds, r1, r2 = bounds_ad_eq_bc(3, 6, 1, 2, Exponent(0))
    assert (r1, r2) == (1, 3)
    assert bounds.lo.value == 1
    assert bounds.hi.value == 2


def test_bounds_containment_scan_oracle():
    """Every exact ratio sample lies inside the computed bounds."""
    cases = [(2, 0, 4, 0, 1), (3, 6, 1, 2, 0), (2, 4, 3, 6, 1), (5, 0, 15, 0, 2)]
    for a, b, c, d, s in cases:
        bounds, _, _ = bounds_ad_eq_bc(a, b, c, d, Exponent(s))
        lo, hi = bounds.lo.value, bounds.hi.value
        for n in range(1, 1001):
            num = sigma_s(factorize(a * n + b), Exponent(s)).value
            den = sigma_s(factorize(c * n + d), Exponent(s)).value
            assert lo <= num / den <= hi, (a, b, c, d, s, n)


def test_bounds_wrong_regime():
    with pytest.raises(DomainError):
        bounds_ad_eq_bc(30, 1, 30, 0, Exponent(1))


def test_bounds_fractional_s_outward():
    bounds, _, _ = bounds_ad_eq_bc(2, 0, 4, 0, Exponent(1, 2))
    lo = value_bounds(bounds.lo)[0]
    hi = value_bounds(bounds.hi)[1]
    for n in (1, 7, 50):
        num = sigma_s(factorize(2 * n), Exponent(1, 2), 192)
        den = sigma_s(factorize(4 * n), Exponent(1, 2), 192)
        ratio_hi = value_bounds(num)[1] / value_bounds(den)[0]
        ratio_lo = value_bounds(num)[0] / value_bounds(den)[1]
        assert lo <= ratio_hi and ratio_lo <= hi


# ---------------------------------------------------------------------------
# |s| > 1 global bounds


def test_global_bounds_identical_progressions():
    bounds, R, M = global_bounds_large_s(1, 0, 1, 0, Exponent(2))
    assert R == M == 1
    z2 = mpf_to_fraction(mpmath.zeta(2))
    assert bounds.lo.value <= 1 / z2 and z2 <= bounds.hi.value


def test_global_bounds_2_5_6_17():
    bounds, R, M = global_bounds_large_s(2, 5, 6, 17, Exponent(2))
    assert R == Fraction(7, 23)
    assert M == 1
    # containment oracle over n <= 10^4
    lo, hi = bounds.lo.value, bounds.hi.value
    for n in range(1, 10_001, 97):
        num = sigma_s(factorize(2 * n + 5), Exponent(2)).value
        den = sigma_s(factorize(6 * n + 17), Exponent(2)).value
        assert lo <= num / den <= hi, n


def test_global_bounds_wrong_regime():
    with pytest.raises(DomainError):
        global_bounds_large_s(2, 5, 6, 17, Exponent(1))


def test_global_bounds_negative_s():
    bounds, R, M = global_bounds_large_s(2, 5, 6, 17, Exponent(-2))
    for n in range(1, 500, 13):
        num = sigma_s(factorize(2 * n + 5), Exponent(-2)).value
        den = sigma_s(factorize(6 * n + 17), Exponent(-2)).value
        assert bounds.lo.value <= num / den <= bounds.hi.value, n


def test_ratio_monotonicity_oracle():
    """(an+b)/(cn+d) is monotone toward a/c; direction = sign(ad - bc)."""
    rng = random.Random(7)
    for _ in range(100):
        a, c = rng.randrange(1, 20), rng.randrange(1, 20)
        b, d = rng.randrange(0, 20), rng.randrange(0, 20)
        det = a * d - b * c
        vals = [Fraction(a * n + b, c * n + d) for n in range(1, 1001)]
        if det > 0:
            assert all(x < y for x, y in zip(vals, vals[1:]))
            assert all(v < Fraction(a, c) for v in vals)
        elif det < 0:
            assert all(x > y for x, y in zip(vals, vals[1:]))
            assert all(v > Fraction(a, c) for v in vals)
        else:
            assert all(v == Fraction(a, c) for v in vals)
        inf_r, sup_r = ratio_extremes(a, b, c, d)
        assert all(inf_r <= v <= sup_r for v in vals)


# ---------------------------------------------------------------------------
# dominance


def test_dominance_5_1_2_1():
    crit = dominance_s0(5, 1, 2, 1)
    assert crit.epsilon == Fraction(1, 6)
    assert crit.s0 == Exponent(4)  # zeta(4) = 1.0823 < 7/6 < zeta(3)
    assert crit.certified


def test_dominance_2_0_1_0():
    crit = dominance_s0(2, 0, 1, 0)
    assert crit.epsilon == Fraction(1, 2)
    assert crit.s0 == Exponent(3)  # zeta(3) = 1.2021 < 3/2


def test_dominance_preconditions():
    with pytest.raises(DomainError):
        dominance_s0(2, 1, 5, 1)  # a <= c
    with pytest.raises(DomainError):
        dominance_s0(5, 1, 2, 3)  # b < d


def test_dominance_real_s0():
    crit = dominance_s0(2, 0, 1, 0, want_real_s0=True)
    assert crit.real_s0 is not None
    assert crit.real_s0.value < 3  # real threshold sharper than the integer one


def test_dominance_eventual_has_explicit_N():
    crit = dominance_eventual(3, 0, 2, 100)
    assert crit.N is not None and crit.N > 1
    eps = crit.epsilon
    # N is the first index from which an+b > (1+eps)(cn+d) holds forever.
    n = crit.N
    assert 3 * n > (1 + eps) * (2 * n + 100)
    assert not 3 * (n - 1) > (1 + eps) * (2 * (n - 1) + 100)


def test_dominance_empirical_containment():
    """Dominance claims show zero violations in desk-scale scans."""
    rng = random.Random(2024)
    checked = 0
    while checked < 8:
        c = rng.randrange(1, 5)
        a = c + rng.randrange(1, 5)
        d = rng.randrange(0, 4)
        b = d + rng.randrange(0, 4)
        crit = dominance_s0(a, b, c, d)
        checked += 1
        for s_int in (crit.s0.num, crit.s0.num + 1):
            spec = RaceSpec(a, b, c, d, s=Exponent(s_int), direction=Direction.GT)
            from sigmarace.race import scan_constancy

            rep = scan_constancy(spec, 10_000)
            assert rep.holds, (a, b, c, d, s_int)


# ---------------------------------------------------------------------------
# always-less criteria


def test_always_less_2_5_6_17():
    crit = always_less_check(2, 5, 6, 17, Exponent(3))
    assert crit.certified
    assert crit.clause_fired == "1 <= a < c*(1 - 1/s0)"


def test_always_less_5_4_6_7_fires_zeta_clause():
    crit = always_less_check(5, 4, 6, 7, Exponent(3))
    assert crit.certified
    assert crit.clause_fired == "a^s0 * zeta(s0) < c^s0"
    # 125 * zeta(3) = 150.2 < 216; the size clause fails (5 >= 4)
    assert dict(crit.clauses)["1 <= a < c*(1 - 1/s0)"] == "failed"


def test_always_less_inconclusive_when_a_exceeds_c():
    crit = always_less_check(6, 1, 2, 5, Exponent(3))  # ad = 30 > bc = 2
    assert not crit.certified
    assert crit.clause_fired is None


def test_always_less_wrong_regime():
    with pytest.raises(DomainError):
        always_less_check(2, 5, 6, 2, Exponent(3))  # ad = 4 < bc = 30
    with pytest.raises(DomainError):
        always_less_check(2, 0, 4, 0, Exponent(3))  # condition (A)


def test_always_less_sumform_1_1_3_0():
    crit = always_less_check_sumform(1, 1, 3, 0, Exponent(4))
    assert crit.certified
    # The zeta clause holds too: 2^4 * zeta(4) = 17.3 < 81.
    assert dict(crit.clauses)["(a+b)^s0 * zeta(s0) < (c+d)^s0"] == "fired"


def test_always_less_sumform_boundary_and_regime():
    with pytest.raises(DomainError):
        always_less_check_sumform(1, 2, 2, 1, Exponent(3))  # a+b = c+d
    with pytest.raises(DomainError):
        always_less_check_sumform(1, 0, 2, 0, Exponent(3))  # ad = bc = 0


def test_always_less_empirical_containment():
    crit = always_less_check(2, 5, 6, 17, Exponent(3))
    assert crit.certified
    from sigmarace.race import scan_constancy

    for s_int in (3, 4):
        spec = RaceSpec(2, 5, 6, 17, s=Exponent(s_int), direction=Direction.LT)
        assert scan_constancy(spec, 10_000).holds


def test_clause_stability_under_tightening():
    """Re-firing a clause with a tighter enclosure never flips it."""
    from sigmarace.theorems import _power_vs_zeta_clause

    first = _power_vs_zeta_clause(5, 6, Exponent(3))
    assert first == "fired"
    # repeat tightly: directly check with a much tighter enclosure
    from sigmarace.numerics import zeta_enclosure

    enc = zeta_enclosure(3, Fraction(1, 10 ** 12))
    assert Fraction(5 ** 3) * enc.hi < 6 ** 3


# ---------------------------------------------------------------------------
# one-sign-change params


def test_thma_min_d_paper_inputs():
    res = thmA_min_d(Exponent(2), 999999, 5, 1, 2, check_d=6224673)
    assert res.checked_verdict == "valid"
    # Oracle: high-precision zeta(2) threshold = 6224671.979...
    t = mpf_to_fraction(mpmath.zeta(2) * (1 + 1000000 * 5) - 1000000 * 2)
    assert res.threshold_lo <= t <= res.threshold_hi
    assert res.min_d == 6224672


def test_thma_min_d_small_case():
    res = thmA_min_d(Exponent(2), 0, 5, 0, 2)
    assert res.min_d == 7  # 5*zeta(2) - 2 = 6.2247


def test_thma_min_d_validation_consistency():
    res = thmA_min_d(Exponent(2), 50, 7, 3, 2, check_d=None)
    ok = thmA_min_d(Exponent(2), 50, 7, 3, 2, check_d=res.min_d)
    bad = thmA_min_d(Exponent(2), 50, 7, 3, 2, check_d=res.min_d - 1)
    assert ok.checked_verdict == "valid"
    assert bad.checked_verdict == "invalid"


def test_thma_min_d_precondition():
    with pytest.raises(DomainError):
        thmA_min_d(Exponent(2), 10, 3, 0, 2)  # 3 < 2*zeta(2) = 3.29


def test_thma_part2_paper_inputs():
    res = thmA_part2_params(9999, 5, 1, 2, 1, 3)
    assert res.d == 29999
    assert res.x1 == Fraction(49997, 49996)
    assert res.x2 == Fraction(50001, 49999)
    assert res.s0 == Exponent(16)


def test_thma_part2_small_case():
    res = thmA_part2_params(1, 5, 1, 2, 1, 3)
    assert res.d == 5
    assert res.x1 == Fraction(7, 6)
    assert res.x2 == Fraction(11, 9)
    assert res.s0 == Exponent(4)


def test_thma_part2_preconditions():
    with pytest.raises(DomainError):
        thmA_part2_params(9999, 5, 1, 2, 1, 4)  # q2 does not divide a - c
    with pytest.raises(DomainError):
        thmA_part2_params(9999, 4, 1, 2, 1, 3)  # a <= 2c
    with pytest.raises(DomainError):
        thmA_part2_params(9999, 5, 0, 2, 1, 3)  # b < 1
    with pytest.raises(DomainError):
        thmA_part2_params(9999, 5, 1, 2, 3, 1)  # q1 >= q2


def test_thma_part2_empirical_crossing_at_M_plus_1():
    """Desk-scale M: '<' for n <= M, '>' for n in M+1..M+100 at s0 and s0+1."""
    rng = random.Random(11)
    for _ in range(5):
        c = rng.randrange(2, 5)
        b = rng.randrange(1, c)
        mult = rng.randrange(1, 4)
        q2 = rng.randrange(2, 5)
        q1 = 1
        while True:
            a = c + q2 * mult
            if a > 2 * c:
                break
            mult += 1
        from math import gcd

        if gcd(q1, q2) != 1:
            continue
        M = rng.randrange(1, 60)
        res = thmA_part2_params(M, a, b, c, q1, q2)
        for s_exp in (res.s0, Exponent(res.s0.num + 1)):
            spec = RaceSpec(a, b, c, res.d, s=s_exp, direction=Direction.GT)
            for n in range(1, M + 1):
                assert sign_at(spec, n) < 0, (a, b, c, res.d, s_exp, n)
            for n in range(M + 1, M + 101):
                assert sign_at(spec, n) > 0, (a, b, c, res.d, s_exp, n)
