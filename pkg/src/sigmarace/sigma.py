"""Divisor-sum evaluation and certified sign comparators.

sigma_s(n) = sum of d^s over divisors d of n, evaluated multiplicatively from
a factorization: exact rationals for integer s, rigorous balls otherwise.

The comparator classes at the bottom decide sign(sigma_s(L) - sigma_s(R))
from pre-extracted factor data. Integer exponents compare exactly; fractional
exponents compare via directed fixed-point bounds on an escalating precision
ladder, with an exact radical-class tie decision before ever giving up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod

from .errors import DomainError, ResourceLimitError
from .factorize import Factorization
from .introot import iroot
from .numerics import (
    DEFAULT_PREC,
    ESCALATION_CAP,
    Ball,
    Exact,
    Exponent,
    ExponentKind,
    ScalarValue,
    ball_from_scaled,
    pow_scalar,
    value_bounds,
)

DIVISOR_CAP = 1 << 20
BASE_SCREEN_BITS = 48

FactorPairs = tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Pointwise evaluation


def sigma_pp_int(p: int, e: int, s: int) -> int:
    """sigma_s(p^e) for integer s >= 0."""
    if s == 0:
        return e + 1
    ps = p ** s
    return (ps ** (e + 1) - 1) // (ps - 1)


def _sigma_exact_int(pairs, s: int) -> Fraction:
    if s >= 0:
        return Fraction(prod(sigma_pp_int(p, e, s) for p, e in pairs))
    t = -s
    num = prod(sigma_pp_int(p, e, t) for p, e in pairs)
    den = prod(p ** (e * t) for p, e in pairs)
    return Fraction(num, den)


def _pp_bounds_frac(p: int, e: int, u: int, v: int, q: int) -> tuple[int, int]:
    """Scaled bounds on sigma_{u/v}(p^e) for u > 0."""
    lo = hi = 1 << q
    pu = 1
    shifted_one = 1 << (q * v)
    for _ in range(e):
        pu *= p ** u
        if v == 2:
            r = isqrt(pu << (q + q))
            lo += r
            hi += r + 1
        else:
            r, ex = iroot(pu * shifted_one, v)
            lo += r
            hi += r if ex else r + 1
    return lo, hi


def _shiftdown(lo: int, hi: int, shift: int) -> tuple[int, int]:
    if shift == 0:
        return lo, hi
    return lo >> shift, -((-hi) >> shift)


def _sigma_bounds_frac(pairs, u: int, v: int, q: int) -> tuple[int, int]:
    """Scaled bounds on sigma_{u/v}(prod p^e) for u > 0."""
    lo = hi = None
    shift = 0
    for p, e in pairs:
        blo, bhi = _pp_bounds_frac(p, e, u, v, q)
        if lo is None:
            lo, hi = blo, bhi
        else:
            lo *= blo
            hi *= bhi
            shift += q
    if lo is None:
        return 1 << q, 1 << q
    return _shiftdown(lo, hi, shift)


def _pow_int_scaled(base: int, u: int, v: int, q: int) -> tuple[int, int]:
    """Scaled bounds on base^(u/v), base >= 1, u > 0."""
    if v == 2:
        r = isqrt((base ** u) << (q + q))
        return r, r + 1
    r, ex = iroot((base ** u) << (q * v), v)
    return r, r if ex else r + 1


def sigma_from_pairs(
    n: int, pairs, s: Exponent, prec: int = DEFAULT_PREC
) -> ScalarValue:
    """sigma_s from (prime, exponent) pairs; pairs must multiply to n."""
    if s.is_integer:
        val = _sigma_exact_int(pairs, s.num)
        return Exact(val)
    if s.kind is ExponentKind.RATIONAL:
        q = prec + 8
        if s.num > 0:
            lo, hi = _sigma_bounds_frac(pairs, s.num, s.den, q)
            return ball_from_scaled(lo, hi, q, prec)
        # sigma_{-t} = sigma_t(n) / n^t
        u, v = -s.num, s.den
        slo, shi = _sigma_bounds_frac(pairs, u, v, q)
        plo, phi = _pow_int_scaled(n, u, v, q)
        lo_f = Fraction(slo, phi)
        hi_f = Fraction(shi, plo)
        return Ball((lo_f + hi_f) / 2, (hi_f - lo_f) / 2, prec)
    # Real exponent: interval product over prime powers.
    lo_f = hi_f = Fraction(1)
    for p, e in pairs:
        term_lo = term_hi = Fraction(1)
        for j in range(1, e + 1):
            b = pow_scalar(Fraction(p) ** j, s, prec + 8)
            blo, bhi = value_bounds(b)
            term_lo += blo
            term_hi += bhi
        lo_f *= term_lo
        hi_f *= term_hi
    return Ball((lo_f + hi_f) / 2, (hi_f - lo_f) / 2, prec)


def sigma_s(f: Factorization, s: Exponent, prec: int = DEFAULT_PREC) -> ScalarValue:
    """sigma_s(n) from a factorization; exact iff s is an integer."""
    return sigma_from_pairs(f.n, f.factors, s, prec)


@dataclass(frozen=True)
class SmallFunctions:
    tau: int
    sigma: int
    phi: int
    omega: int
    big_omega: int


def small_functions(f: Factorization) -> SmallFunctions:
    """tau, sigma, phi, omega, Omega via the standard multiplicative formulas."""
    tau = sigma = phi = 1
    for p, e in f.factors:
        tau *= e + 1
        sigma *= (p ** (e + 1) - 1) // (p - 1)
        phi *= p ** (e - 1) * (p - 1)
    return SmallFunctions(tau, sigma, phi, f.omega, f.big_omega)


def sigma_restricted(
    f: Factorization,
    q: int,
    a_res: int,
    s: Exponent,
    prec: int = DEFAULT_PREC,
    cap: int = DIVISOR_CAP,
) -> ScalarValue:
    """sigma_s(n, q, a): sum of d^s over divisors d = a (mod q)."""
    if q < 2:
        raise DomainError("modulus must be >= 2")
    if not 0 <= a_res < q:
        raise DomainError("residue must satisfy 0 <= a < q")
    hits = [d for d in f.divisors(cap) if d % q == a_res]
    if s.is_integer:
        return Exact(sum((Fraction(d) ** s.num for d in hits), Fraction(0)))
    lo = hi = Fraction(0)
    for d in hits:
        b = pow_scalar(Fraction(d), s, prec + 8)
        blo, bhi = value_bounds(b)
        lo += blo
        hi += bhi
    return Ball((lo + hi) / 2, (hi - lo) / 2, prec)


def sigma_reflect_check(
    f: Factorization, r: Exponent, prec: int = DEFAULT_PREC
) -> tuple[ScalarValue, ScalarValue]:
    """Return (sigma_{-r}(m), sigma_r(m)/m^r); the two enclose a common value."""
    if r.value <= 0:
        raise DomainError("reflection exponent must be positive")
    neg = Exponent(-r.num, r.den)
    left = sigma_s(f, neg, prec)
    right_num = sigma_s(f, r, prec)
    if isinstance(right_num, Exact) and r.is_integer:
        right: ScalarValue = Exact(right_num.value / Fraction(f.n) ** r.num)
    else:
        nlo, nhi = value_bounds(right_num)
        db = pow_scalar(Fraction(f.n), r, prec + 8)
        dlo, dhi = value_bounds(db)
        lo, hi = nlo / dhi, nhi / dlo
        right = Ball((lo + hi) / 2, (hi - lo) / 2, prec)
    return left, right


# ---------------------------------------------------------------------------
# Radical-class exact tie decision (rational exponents)


def _radical_vector(pairs, mult_pairs, u: int, v: int, cap: int = 1 << 16):
    """Coefficient vector of sum_{d | prod(pairs)} (d * mult)^(u/v).

    Terms are grouped by the v-th-power-free core of (d*mult)^u; two sums are
    equal iff the vectors agree (distinct cores have linearly independent
    v-th roots over the rationals).
    """
    tau = 1
    for _, e in pairs:
        tau *= e + 1
        if tau > cap:
            raise ResourceLimitError("tie decision divisor cap exceeded")
    mult = dict(mult_pairs)
    terms = [dict(mult)]
    for p, e in pairs:
        new = []
        for g in range(e + 1):
            for t in terms:
                t2 = dict(t)
                if g:
                    t2[p] = t2.get(p, 0) + g
                new.append(t2)
        terms = new
    vec: dict[int, int] = {}
    for t in terms:
        core = 1
        coeff = 1
        for p, g in t.items():
            gu = g * u
            core *= p ** (gu % v)
            coeff *= p ** (gu // v)
        vec[core] = vec.get(core, 0) + coeff
    return vec


def _with_residual(facs, r: int) -> FactorPairs:
    if r > 1:
        return tuple(facs) + ((r, 1),)
    return tuple(facs)


# ---------------------------------------------------------------------------
# Race comparators


def _ladder(base: int, cap: int) -> tuple[int, ...]:
    steps = [base]
    p = DEFAULT_PREC
    while p < cap:
        steps.append(p)
        p *= 2
    steps.append(cap)
    return tuple(dict.fromkeys(steps))


class _IntComparator:
    """Exact comparator for integer s >= 0 (s = 0 is tau, s = 1 is sigma)."""

    def __init__(self, s: int):
        self.s = s
        self.cache: dict[tuple[int, int], int] = {}
        self.max_prec_used = 0

    def value(self, m, facs, r) -> int:
        s = self.s
        cache = self.cache
        v = 1
        for pe in facs:
            t = cache.get(pe)
            if t is None:
                t = sigma_pp_int(pe[0], pe[1], s)
                cache[pe] = t
            v *= t
        if r > 1:
            if s == 0:
                v += v
            elif s == 1:
                v *= 1 + r
            else:
                v *= 1 + r ** s
        return v

    def compare(self, mL, facsL, rL, mR, facsR, rR):
        a = self.value(mL, facsL, rL)
        b = self.value(mR, facsR, rR)
        return (a > b) - (a < b)


class _NegIntComparator:
    """Exact comparator for integer s < 0 via sigma_t(m)/m^t cross-multiplied."""

    def __init__(self, t: int):
        self.t = t
        self._pos = _IntComparator(t)
        self.max_prec_used = 0

    def compare(self, mL, facsL, rL, mR, facsR, rR):
        t = self.t
        a = self._pos.value(mL, facsL, rL) * mR ** t
        b = self._pos.value(mR, facsR, rR) * mL ** t
        return (a > b) - (a < b)


class _FracComparator:
    """Certified comparator for rational s = u/v (u may be negative).

    Screens at BASE_SCREEN_BITS, then climbs the doubling precision ladder;
    at the cap an exact radical-class test decides genuine ties.
    """

    def __init__(self, u: int, v: int, base_q: int = BASE_SCREEN_BITS, cap: int = ESCALATION_CAP):
        self.u = u
        self.v = v
        self.negative = u < 0
        self.au = abs(u)
        self.ladder = _ladder(base_q, cap)
        self.cap = cap
        self.caches: dict[int, dict] = {q: {} for q in self.ladder}
        self.max_prec_used = base_q

    def _side_bounds(self, facs, r, q, cache):
        u, v = self.au, self.v
        lo = hi = None
        shift = 0
        one = 1 << q
        for pe in facs:
            t = cache.get(pe)
            if t is None:
                t = _pp_bounds_frac(pe[0], pe[1], u, v, q)
                cache[pe] = t
            if lo is None:
                lo, hi = t
            else:
                lo *= t[0]
                hi *= t[1]
                shift += q
        if r > 1:
            if v == 2:
                root = isqrt((r ** u) << (q + q))
                rlo, rhi = one + root, one + root + 1
            else:
                root, ex = iroot((r ** u) << (q * v), v)
                rlo = one + root
                rhi = rlo if ex else rlo + 1
            if lo is None:
                lo, hi = rlo, rhi
            else:
                lo *= rlo
                hi *= rhi
                shift += q
        if lo is None:
            return one, one
        return _shiftdown(lo, hi, shift)

    def compare(self, mL, facsL, rL, mR, facsR, rR):
        for q in self.ladder:
            cache = self.caches[q]
            loL, hiL = self._side_bounds(facsL, rL, q, cache)
            loR, hiR = self._side_bounds(facsR, rR, q, cache)
            if self.negative:
                # sigma_{-t}(m) = sigma_t(m)/m^t: cross-multiply by the powers.
                pL = _pow_int_scaled(mL, self.au, self.v, q)
                pR = _pow_int_scaled(mR, self.au, self.v, q)
                loL, hiL = loL * pR[0], hiL * pR[1]
                loR, hiR = loR * pL[0], hiR * pL[1]
            if q > self.max_prec_used:
                self.max_prec_used = q
            if hiL < loR:
                return -1
            if hiR < loL:
                return 1
        if self._tie_equal(mL, facsL, rL, mR, facsR, rR):
            return 0
        return None

    def _tie_equal(self, mL, facsL, rL, mR, facsR, rR) -> bool:
        u, v = self.au, self.v
        pairsL = _with_residual(facsL, rL)
        pairsR = _with_residual(facsR, rR)
        try:
            if self.negative:
                vl = _radical_vector(pairsL, pairsR, u, v)
                vr = _radical_vector(pairsR, pairsL, u, v)
            else:
                vl = _radical_vector(pairsL, (), u, v)
                vr = _radical_vector(pairsR, (), u, v)
        except ResourceLimitError:
            return False
        return vl == vr


class _RealComparator:
    """Ball comparator for real-kind exponents (rare, interval exp/log path)."""

    def __init__(self, s: Exponent, cap: int = ESCALATION_CAP):
        self.s = s
        self.cap = cap
        self.max_prec_used = DEFAULT_PREC

    def compare(self, mL, facsL, rL, mR, facsR, rR):
        prec = DEFAULT_PREC
        while True:
            a = sigma_from_pairs(mL, _with_residual(facsL, rL), self.s, prec)
            b = sigma_from_pairs(mR, _with_residual(facsR, rR), self.s, prec)
            alo, ahi = value_bounds(a)
            blo, bhi = value_bounds(b)
            self.max_prec_used = max(self.max_prec_used, prec)
            if ahi < blo:
                return -1
            if bhi < alo:
                return 1
            if prec >= self.cap:
                return None
            prec = min(2 * prec, self.cap)


def make_comparator(s: Exponent, base_q: int = BASE_SCREEN_BITS, cap: int = ESCALATION_CAP):
    """Comparator with .compare(mL, facsL, rL, mR, facsR, rR) -> -1/0/+1/None."""
    if s.is_integer:
        return _IntComparator(s.num) if s.num >= 0 else _NegIntComparator(-s.num)
    if s.kind is ExponentKind.RATIONAL:
        return _FracComparator(s.num, s.den, base_q, cap)
    return _RealComparator(s, cap)
