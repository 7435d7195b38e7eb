"""Calculators for the explicit ratio bounds and dominance criteria.

Each calculator instantiates one sufficient condition with exact rationals
and certified zeta enclosures, reports every clause it evaluated and which
one fired, and never certifies from a straddled enclosure: straddling bounds
auto-tighten up to a cap and only then report indeterminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionError
from .numerics import (
    Ball,
    Exact,
    Exponent,
    ScalarValue,
    pow_scalar,
    solve_zeta_threshold,
    value_bounds,
    zeta_enclosure,
)
from .race import check_condition_A

_TIGHTEN_RADII = tuple(Fraction(1, 10 ** k) for k in (9, 15, 24, 40, 60, 80))


@dataclass(frozen=True)
class RatioBounds:
    lo: ScalarValue
    hi: ScalarValue
    provenance: str


@dataclass(frozen=True)
class DominanceCriterion:
    a: int
    b: int
    c: int
    d: int
    s0: Exponent | None
    certified: bool
    claim: str
    clause_fired: str | None
    clauses: tuple[tuple[str, str], ...]  # (clause, 'fired'|'failed'|'indeterminate')
    epsilon: Fraction | None = None
    M: int | None = None
    N: int | None = None
    real_s0: Exponent | None = None


def _scalar_ratio(num: ScalarValue, den: ScalarValue, prec: int = 128) -> ScalarValue:
    if isinstance(num, Exact) and isinstance(den, Exact):
        return Exact(num.value / den.value)
    nlo, nhi = value_bounds(num)
    dlo, dhi = value_bounds(den)
    lo, hi = nlo / dhi, nhi / dlo
    return Ball((lo + hi) / 2, (hi - lo) / 2, prec)


# ---------------------------------------------------------------------------
# ad = bc regime


def bounds_ad_eq_bc(
    a: int, b: int, c: int, d: int, s: Exponent, prec: int = 128
) -> tuple[RatioBounds, int, int]:
    """Two-sided bounds on sigma_s(an+b)/sigma_s(cn+d) when ad = bc.

    Uses the minimal positive pair (r1, r2) with r1*(a,b) = r2*(c,d):
    lo = r2^s / sigma_s(r1), hi = sigma_s(r2) / r1^s.
    """
    if a < 1 or c < 1:
        raise DomainError("need a >= 1 and c >= 1")
    if a * d != b * c:
        raise DomainError("wrong regime: these bounds require ad = bc")
    from .factorize import factorize
    from .sigma import sigma_s

    g = math.gcd(a, c)
    r1, r2 = c // g, a // g
    if r1 * b != r2 * d:  # pragma: no cover - impossible given ad = bc
        raise DomainError("no rational dependency despite ad = bc")
    lo = _scalar_ratio(pow_scalar(r2, s, prec), sigma_s(factorize(r1), s, prec), prec)
    hi = _scalar_ratio(sigma_s(factorize(r2), s, prec), pow_scalar(r1, s, prec), prec)
    return RatioBounds(lo, hi, "ratio-bounds-ad-eq-bc"), r1, r2


# ---------------------------------------------------------------------------
# |s| > 1 global bounds


def ratio_extremes(a: int, b: int, c: int, d: int) -> tuple[Fraction, Fraction]:
    """inf and sup of (an+b)/(cn+d) over n >= 1 (sup/inf may be the limit a/c)."""
    first = Fraction(a + b, c + d)
    limit = Fraction(a, c)
    det = a * d - b * c
    if det > 0:  # strictly increasing toward a/c
        return first, limit
    if det < 0:  # strictly decreasing toward a/c
        return limit, first
    return limit, limit


def global_bounds_large_s(
    a: int, b: int, c: int, d: int, s: Exponent, prec: int = 128
) -> tuple[RatioBounds, Fraction, Fraction]:
    """R^|s|/zeta(|s|) <= sigma_s(an+b)/sigma_s(cn+d) <= zeta(|s|)*M^|s|."""
    if a < 1 or c < 1 or b < 0 or d < 0:
        raise DomainError("need a, c >= 1 and b, d >= 0")
    if abs(s.value) <= 1:
        raise DomainError("wrong regime: global bounds require |s| > 1")
    abs_s = Exponent(abs(s.num), s.den)
    inf_r, sup_r = ratio_extremes(a, b, c, d)
    R = min(Fraction(1), inf_r)
    M = max(Fraction(1), sup_r)
    enc = zeta_enclosure(abs_s, Fraction(1, 10 ** 12))
    r_lo, _ = value_bounds(pow_scalar(R, abs_s, prec))
    _, m_hi = value_bounds(pow_scalar(M, abs_s, prec))
    lo = r_lo / enc.hi
    hi = enc.hi * m_hi
    return RatioBounds(Exact(lo), Exact(hi), "global-bounds-large-s"), R, M


# ---------------------------------------------------------------------------
# Uniform dominance for large s


def dominance_s0(
    a: int, b: int, c: int, d: int, want_real_s0: bool = False
) -> DominanceCriterion:
    """a > c >= 1, b >= d >= 0: sigma_s(an+b) > sigma_s(cn+d) for s >= s0, n >= 1.

    epsilon is half of min(1/c, (b-d+1)/(c+d)); s0 is the minimal integer with
    zeta(s0) < 1 + epsilon, certified by enclosure.
    """
    if not (a > c >= 1):
        raise DomainError("need a > c >= 1")
    if not (b >= d >= 0):
        raise DomainError("need b >= d >= 0")
    eps = min(Fraction(1, c), Fraction(b - d + 1, c + d)) / 2
    zt = solve_zeta_threshold(1 + eps, integer_only=True)
    real = None
    if want_real_s0:
        real = solve_zeta_threshold(1 + eps, integer_only=False).s
    clause = f"zeta(s0) < 1 + epsilon with epsilon = {eps}"
    return DominanceCriterion(
        a,
        b,
        c,
        d,
        s0=zt.s,
        certified=True,
        claim=(
            f"sigma_s({a}n+{b}) > sigma_s({c}n+{d}) for all real s >= {zt.s} "
            f"and all n >= 1"
        ),
        clause_fired=clause,
        clauses=((clause, "fired"),),
        epsilon=eps,
        N=1,
        real_s0=real,
    )


def dominance_eventual(a: int, b: int, c: int, d: int) -> DominanceCriterion:
    """a > c, arbitrary b, d >= 0: explicit N and s0 with dominance for n >= N."""
    if not (a > c >= 1):
        raise DomainError("need a > c >= 1")
    if b < 0 or d < 0:
        raise DomainError("offsets must be nonnegative")
    eps = (Fraction(a, c) - 1) / 2
    slope = Fraction(a) - (1 + eps) * c  # = (a - c)/2 > 0
    cut = ((1 + eps) * d - b) / slope
    N = max(1, math.floor(cut) + 1)
    zt = solve_zeta_threshold(1 + eps, integer_only=True)
    clause = f"zeta(s0) < 1 + epsilon with epsilon = {eps}"
    return DominanceCriterion(
        a,
        b,
        c,
        d,
        s0=zt.s,
        certified=True,
        claim=(
            f"sigma_s({a}n+{b}) > sigma_s({c}n+{d}) for all real s >= {zt.s} "
            f"and all n >= {N}"
        ),
        clause_fired=clause,
        clauses=((clause, "fired"),),
        epsilon=eps,
        N=N,
    )


# ---------------------------------------------------------------------------
# Always-less criteria (ad > bc and ad < bc forms)


def _power_vs_zeta_clause(
    base_small: int, base_large: int, s0: Exponent
) -> str | None:
    """Certified truth of base_small^s0 * zeta(s0) < base_large^s0, else None.

    Returns 'fired' / 'failed' when certified either way, None if enclosures
    kept straddling at the tightest radius.
    """
    for radius in _TIGHTEN_RADII:
        try:
            enc = zeta_enclosure(s0, radius)
        except PrecisionError:
            return None
        prec = max(128, radius.denominator.bit_length() + 64)
        s_lo, s_hi = value_bounds(pow_scalar(base_small, s0, prec))
        l_lo, l_hi = value_bounds(pow_scalar(base_large, s0, prec))
        if s_hi * enc.hi < l_lo:
            return "fired"
        if s_lo * enc.lo >= l_hi:
            return "failed"
    return None


def _always_less(
    a: int, b: int, c: int, d: int, s0: Exponent, x: int, y: int, labels: tuple[str, str]
) -> DominanceCriterion:
    """Shared body: x plays a (or a+b), y plays c (or c+d)."""
    label1, label2 = labels
    # The exact size clause needs no enclosure; it takes precedence when true.
    ok2 = 1 <= x and Fraction(x) < y * (1 - 1 / s0.value)
    res1 = _power_vs_zeta_clause(x, y, s0)
    clauses = [
        (label1, res1 if res1 else "indeterminate"),
        (label2, "fired" if ok2 else "failed"),
    ]
    fired = label2 if ok2 else (label1 if res1 == "fired" else None)
    return DominanceCriterion(
        a,
        b,
        c,
        d,
        s0=s0,
        certified=fired is not None,
        claim=(
            f"sigma_s({a}n+{b}) < sigma_s({c}n+{d}) for all real s >= {s0} "
            f"and all n >= 1"
            if fired
            else "no clause fired; criterion inconclusive"
        ),
        clause_fired=fired,
        clauses=tuple(clauses),
        N=1 if fired else None,
    )


def always_less_check(a: int, b: int, c: int, d: int, s0: Exponent) -> DominanceCriterion:
    """ad > bc form: fires on a^s0*zeta(s0) < c^s0 or 1 <= a < c(1-1/s0)."""
    report = check_condition_A(a, b, c, d)
    if not report.satisfied:
        raise DomainError(f"condition (A) fails: {', '.join(report.violations)}")
    if a * d <= b * c:
        raise DomainError("wrong regime: this criterion requires ad > bc")
    if s0.value <= 1:
        raise DomainError("s0 must exceed 1")
    return _always_less(
        a, b, c, d, s0, a, c,
        ("a^s0 * zeta(s0) < c^s0", "1 <= a < c*(1 - 1/s0)"),
    )


def always_less_check_sumform(
    a: int, b: int, c: int, d: int, s0: Exponent
) -> DominanceCriterion:
    """ad < bc form: same clauses with a+b and c+d in place of a and c."""
    report = check_condition_A(a, b, c, d)
    if not report.satisfied:
        raise DomainError(f"condition (A) fails: {', '.join(report.violations)}")
    if a * d >= b * c:
        raise DomainError("wrong regime: this criterion requires ad < bc")
    if a + b >= c + d:
        raise DomainError("precondition a + b < c + d fails")
    if s0.value <= 1:
        raise DomainError("s0 must exceed 1")
    return _always_less(
        a, b, c, d, s0, a + b, c + d,
        ("(a+b)^s0 * zeta(s0) < (c+d)^s0", "a+b < (c+d)*(1 - 1/s0)"),
    )


# ---------------------------------------------------------------------------
# One-sign-change constructions


@dataclass(frozen=True)
class SignChangeParams:
    s0: Exponent
    M: int
    a: int
    b: int
    c: int
    threshold_lo: Fraction
    threshold_hi: Fraction
    min_d: int
    checked_d: int | None
    checked_verdict: str | None  # valid | invalid | indeterminate
    claim: str


def _certify_a_gt_c_zeta(a: int, c: int, s0: Exponent) -> None:
    for radius in _TIGHTEN_RADII:
        try:
            enc = zeta_enclosure(s0, radius)
        except PrecisionError:
            break
        if Fraction(a) > c * enc.hi:
            return
        if Fraction(a) <= c * enc.lo:
            raise DomainError(f"precondition a > c*zeta(s0) fails ({a} vs {c}*zeta({s0}))")
    raise PrecisionError("a vs c*zeta(s0) straddles the tightest enclosure")


def thmA_min_d(
    s0: Exponent,
    M: int,
    a: int,
    b: int,
    c: int,
    check_d: int | None = None,
) -> SignChangeParams:
    """Minimal integer d with d >= zeta(s0)*b + (M+1)*(a*zeta(s0) - c).

    Such a d forces sigma_s(an+b) < sigma_s(cn+d) for n <= M and the reverse
    for all large n, for every s >= s0. Optionally validates a proposed d
    against the same threshold (tri-state, straddles auto-tighten).
    """
    if s0.value <= 1:
        raise DomainError("s0 must exceed 1")
    if b < 0 or c < 1 or M < 0:
        raise DomainError("need b >= 0, c >= 1, M >= 0")
    _certify_a_gt_c_zeta(a, c, s0)
    weight = b + (M + 1) * a
    min_d = None
    t_lo = t_hi = None
    for radius in _TIGHTEN_RADII:
        try:
            enc = zeta_enclosure(s0, radius)
        except PrecisionError:
            break
        t_lo = enc.lo * weight - (M + 1) * c
        t_hi = enc.hi * weight - (M + 1) * c
        if math.floor(t_lo) == math.floor(t_hi):
            min_d = math.floor(t_hi) + 1
            break
    if min_d is None:
        raise PrecisionError("threshold straddles an integer at the tightest enclosure")
    verdict = None
    if check_d is not None:
        if check_d >= t_hi:
            verdict = "valid"
        elif check_d < t_lo:
            verdict = "invalid"
        else:
            verdict = "indeterminate"
    return SignChangeParams(
        s0=s0,
        M=M,
        a=a,
        b=b,
        c=c,
        threshold_lo=t_lo,
        threshold_hi=t_hi,
        min_d=min_d,
        checked_d=check_d,
        checked_verdict=verdict,
        claim=(
            f"with d >= {min_d}: sigma_s({a}n+{b}) < sigma_s({c}n+d) for "
            f"n <= {M} and > for all large n, for every real s >= {s0}"
        ),
    )


@dataclass(frozen=True)
class ExactSignChangeParams:
    M: int
    a: int
    b: int
    c: int
    q1: int
    q2: int
    d: int
    x1: Fraction
    x2: Fraction
    s0: Exponent
    claim: str


def thmA_part2_params(
    M: int, a: int, b: int, c: int, q1: int, q2: int
) -> ExactSignChangeParams:
    """d = (M + q1/q2)(a-c) + b and the exact thresholds that pin the crossing.

    The crossing sits exactly at n = M+1 for every s >= s0, where s0 is the
    minimal integer with zeta(s0) < min(x1, x2) and
    x1 = (d+Mc)/(Ma+b), x2 = ((M+1)a+b)/(d+(M+1)c).
    """
    if not (c > b >= 1):
        raise DomainError("need c > b >= 1")
    if not a > 2 * c:
        raise DomainError("need a > 2c")
    if not (0 < q1 < q2):
        raise DomainError("need 0 < q1 < q2")
    if math.gcd(q1, q2) != 1:
        raise DomainError("q1/q2 must be in lowest terms")
    if (a - c) % q2 != 0:
        raise DomainError("q2 must divide a - c")
    if M < 1:
        raise DomainError("M must be >= 1")
    d = (M * q2 + q1) * ((a - c) // q2) + b
    x1 = Fraction(d + M * c, M * a + b)
    x2 = Fraction((M + 1) * a + b, d + (M + 1) * c)
    if x1 <= 1 or x2 <= 1:  # pragma: no cover - guaranteed by the construction
        raise DomainError("degenerate thresholds")
    zt = solve_zeta_threshold(min(x1, x2), integer_only=True)
    return ExactSignChangeParams(
        M=M,
        a=a,
        b=b,
        c=c,
        q1=q1,
        q2=q2,
        d=d,
        x1=x1,
        x2=x2,
        s0=zt.s,
        claim=(
            f"sigma_s({a}n+{b}) < sigma_s({c}n+{d}) for n <= {M} and > for "
            f"n >= {M + 1}, for every real s >= {zt.s}"
        ),
    )
