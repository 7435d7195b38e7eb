"""Exact rational and rigorous ball arithmetic, plus zeta enclosures.

Values live in a two-track representation: `Exact` wraps a Fraction, `Ball`
wraps a dyadic midpoint/radius pair guaranteed to contain the true value.
Comparisons only ever report Less/Greater when that is mathematically certain;
overlapping balls yield Undecided and callers escalate precision.

Exponents are classified by reduced denominator: den == 1 -> integer,
2 <= den <= 64 -> rational (exact root kernels), den > 64 -> real (decimal
literals parse to exact rationals over powers of ten; powers for these go
through interval exp/log).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Union

from .errors import DomainError, PrecisionError
from .introot import ceil_div, iroot, pow_bounds

DEFAULT_PREC = 128
ESCALATION_CAP = 4096

# Largest root order handled by the exact integer kernels; beyond this the
# interval exp/log backend takes over.
RATIONAL_DEN_LIMIT = 64


class ExponentKind(enum.Enum):
    INTEGER = "integer"
    RATIONAL = "rational"
    REAL = "real"


@dataclass(frozen=True, order=False)
class Exponent:
    """A fixed real exponent s, stored as an exact reduced fraction."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise DomainError("exponent denominator must be nonzero")
        f = Fraction(self.num, self.den)
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @property
    def kind(self) -> ExponentKind:
        if self.den == 1:
            return ExponentKind.INTEGER
        if self.den <= RATIONAL_DEN_LIMIT:
            return ExponentKind.RATIONAL
        return ExponentKind.REAL

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    @classmethod
    def parse(cls, text: str) -> "Exponent":
        """Parse '3', '-1', '1/2', '0.5' (decimals are exact over 10^k)."""
        text = text.strip()
        if re.fullmatch(r"[+-]?\d+", text):
            return cls(int(text))
        m = re.fullmatch(r"([+-]?\d+)\s*/\s*(\d+)", text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"([+-]?)(\d+)\.(\d+)", text)
        if m:
            sign = -1 if m.group(1) == "-" else 1
            whole, frac = m.group(2), m.group(3)
            num = sign * int(whole + frac)
            return cls(num, 10 ** len(frac))
        raise DomainError(f"cannot parse exponent {text!r}")

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


class Exact(NamedTuple):
    value: Fraction


class Ball(NamedTuple):
    mid: Fraction
    rad: Fraction
    prec: int

    @property
    def lo(self) -> Fraction:
        return self.mid - self.rad

    @property
    def hi(self) -> Fraction:
        return self.mid + self.rad


ScalarValue = Union[Exact, Ball]


def exact(x) -> Exact:
    return Exact(Fraction(x))


def ball_from_scaled(lo: int, hi: int, q: int, prec: int) -> Ball:
    """Ball for a value enclosed by [lo, hi] / 2^q."""
    if hi < lo:
        raise ValueError("inverted scaled bounds")
    return Ball(Fraction(lo + hi, 2 << q), Fraction(hi - lo, 2 << q), prec)


def value_bounds(x: ScalarValue) -> tuple[Fraction, Fraction]:
    if isinstance(x, Exact):
        return x.value, x.value
    return x.lo, x.hi


class Rel(enum.Enum):
    LESS = "lt"
    EQUAL = "eq"
    GREATER = "gt"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Comparison:
    rel: Rel
    precision_reached: int | None = None

    @property
    def decided(self) -> bool:
        return self.rel is not Rel.UNDECIDED


LESS = Comparison(Rel.LESS)
EQUAL = Comparison(Rel.EQUAL)
GREATER = Comparison(Rel.GREATER)


def compare(x: ScalarValue, y: ScalarValue) -> Comparison:
    """Certified comparison; Equal only ever comes from exact arithmetic."""
    if isinstance(x, Exact) and isinstance(y, Exact):
        if x.value < y.value:
            return LESS
        if x.value > y.value:
            return GREATER
        return EQUAL
    xl, xh = value_bounds(x)
    yl, yh = value_bounds(y)
    if xh < yl:
        return LESS
    if yh < xl:
        return GREATER
    precs = [v.prec for v in (x, y) if isinstance(v, Ball)]
    return Comparison(Rel.UNDECIDED, precision_reached=max(precs))


def decide(
    make_left: Callable[[int], ScalarValue],
    make_right: Callable[[int], ScalarValue],
    start_prec: int = DEFAULT_PREC,
    cap: int = ESCALATION_CAP,
) -> Comparison:
    """Compare two recomputable values, doubling precision up to the cap."""
    prec = start_prec
    while True:
        c = compare(make_left(prec), make_right(prec))
        if c.decided:
            return c
        if prec >= cap:
            return Comparison(Rel.UNDECIDED, precision_reached=prec)
        prec = min(2 * prec, cap)


# ---------------------------------------------------------------------------
# Powers


def _mpf_tuple_to_fraction(t) -> Fraction:
    """Exact rational value of a finite raw mpf tuple (sign, man, exp, bc)."""
    sign, man, exp, _ = t
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _pow_real_ball(x: Fraction, s: Fraction, prec: int) -> Ball:
    """x^s via interval exp(s*ln x); only the real-exponent path uses this."""
    import mpmath

    if x <= 0:
        raise DomainError("real-exponent powers require a positive base")
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec + 32
        xi = iv.mpf(x.numerator) / iv.mpf(x.denominator)
        si = iv.mpf(s.numerator) / iv.mpf(s.denominator)
        res = iv.exp(si * iv.log(xi))
        lo_t, hi_t = res._mpi_
        lo = _mpf_tuple_to_fraction(lo_t)
        hi = _mpf_tuple_to_fraction(hi_t)
    finally:
        iv.prec = old
    return Ball((lo + hi) / 2, (hi - lo) / 2, prec)


def pow_fraction_bounds(x: Fraction, s: Exponent, q: int) -> tuple[int, int]:
    """Directed 2^q-scaled bounds on x^s for a rational-kind exponent."""
    return pow_bounds(x.numerator, x.denominator, s.num, s.den, q)


def pow_scalar(x, s: Exponent, prec: int = DEFAULT_PREC) -> ScalarValue:
    """x^s for a nonnegative rational x: exact when possible, else a ball.

    Exactness: integer exponents always; rational u/v whenever x^u is a
    perfect v-th power (e.g. 4^(1/2), 8^(2/3)).
    """
    x = Fraction(x)
    if x < 0:
        raise DomainError("base must be nonnegative")
    if x == 0:
        if s.value <= 0:
            raise DomainError("0 cannot be raised to a nonpositive power")
        return Exact(Fraction(0))
    if s.is_integer:
        return Exact(x ** s.num)
    if s.kind is ExponentKind.RATIONAL:
        u, v = s.num, s.den
        num, den = (x.numerator, x.denominator) if u >= 0 else (x.denominator, x.numerator)
        au = abs(u)
        rn, en = iroot(num ** au, v)
        if en:
            rd, ed = iroot(den ** au, v)
            if ed:
                return Exact(Fraction(rn, rd))
        q = prec + 8
        lo, hi = pow_bounds(x.numerator, x.denominator, u, v, q)
        return ball_from_scaled(lo, hi, q, prec)
    return _pow_real_ball(x, s.value, prec)


# ---------------------------------------------------------------------------
# Zeta enclosures


@dataclass(frozen=True)
class ZetaEnclosure:
    s: Exponent
    lo: Fraction
    hi: Fraction
    terms_used: int

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def __contains__(self, v) -> bool:
        return self.lo <= Fraction(v) <= self.hi


ZETA_TERM_CAP = 2_000_000


def _as_exponent(s) -> Exponent:
    if isinstance(s, Exponent):
        return s
    if isinstance(s, Fraction):
        return Exponent(s.numerator, s.denominator)
    return Exponent(int(s))


def _scaled_from_ball(b: Ball, q: int) -> tuple[int, int]:
    scale = 1 << q
    return math.floor(b.lo * scale), math.ceil(b.hi * scale)


def _power_scaled(x: Fraction, s: Exponent, q: int) -> tuple[int, int]:
    """Scaled bounds on x^s for any exponent kind (x > 0)."""
    if s.kind is ExponentKind.REAL:
        return _scaled_from_ball(_pow_real_ball(x, s.value, q + 8), q)
    return pow_bounds(x.numerator, x.denominator, s.num, s.den, q)


def _term_bounds(n: int, s: Exponent, q: int) -> tuple[int, int]:
    """Scaled bounds on n^(-s)."""
    if s.is_integer:
        x = 1 << q
        d = n ** s.num
        return x // d, ceil_div(x, d)
    return _power_scaled(Fraction(1, n), s, q)


def _tail_bounds(n: int, s: Exponent, q: int) -> tuple[Fraction, Fraction]:
    """Exact-directed bounds on n^(1-s)/(s-1) (the integral of t^-s from n)."""
    sm1 = s.value - 1
    if s.is_integer:
        return (Fraction(1, sm1 * n ** (s.num - 1)),) * 2
    one_minus_s = Exponent(s.den - s.num, s.den)
    lo, hi = _power_scaled(Fraction(n), one_minus_s, q)
    return Fraction(lo, 1 << q) / sm1, Fraction(hi, 1 << q) / sm1


def zeta_enclosure(s, target_radius, term_cap: int = ZETA_TERM_CAP) -> ZetaEnclosure:
    """Certified rational enclosure of zeta(s) for s > 1.

    lo = sum_{n<=N} n^-s + integral_{N+1..inf} t^-s dt rounded down,
    hi = sum_{n<=N} n^-s + integral_{N..inf} t^-s dt rounded up, with N grown
    until hi - lo <= target_radius. hi is clamped at s/(s-1), which always
    dominates zeta(s).
    """
    s = _as_exponent(s)
    if s.value <= 1:
        raise DomainError("zeta enclosures require s > 1")
    target = Fraction(target_radius)
    if target <= 0:
        raise DomainError("target radius must be positive")
    cap = Fraction(s.value, s.value - 1)

    N = 2
    best_width = None
    while True:
        # Precision: keep the directed-rounding slack well under target/2 and
        # under 2^-(s+1) so the lower bound stays above 1.
        slack_bits = math.ceil(4 * (N + 4) / target).bit_length() + 2
        q = max(slack_bits, int(s.value) + 8, 48)
        lo_acc = 0
        hi_acc = 0
        for n in range(1, N + 1):
            tl, th = _term_bounds(n, s, q)
            lo_acc += tl
            hi_acc += th
        tail_lo, _ = _tail_bounds(N + 1, s, q)
        _, tail_hi = _tail_bounds(N, s, q)
        lo = Fraction(lo_acc, 1 << q) + tail_lo
        hi = min(Fraction(hi_acc, 1 << q) + tail_hi, cap)
        width = hi - lo
        if width <= target:
            return ZetaEnclosure(s, lo, hi, N)
        best_width = width if best_width is None else min(width, best_width)
        if N >= term_cap:
            raise PrecisionError(
                f"zeta({s}) cannot reach radius {target} within {term_cap} "
                f"terms; achievable radius ~ {float(best_width):.3e}",
                achievable=best_width,
            )
        N = min(2 * N, term_cap)


def _zeta_vs_threshold(
    s, x: Fraction, term_cap: int = ZETA_TERM_CAP, max_refine: int = 10
) -> tuple[Comparison, "ZetaEnclosure | None"]:
    """Certified comparison zeta(s) vs x plus the enclosure that decided it."""
    s = _as_exponent(s)
    x = Fraction(x)
    radius = max((x - 1) / 8, Fraction(1, 10 ** 12))
    for _ in range(max_refine):
        try:
            enc = zeta_enclosure(s, radius, term_cap)
        except PrecisionError:
            return Comparison(Rel.UNDECIDED, precision_reached=term_cap), None
        if enc.hi < x:
            return LESS, enc
        if enc.lo > x:
            return GREATER, enc
        radius /= 64
    return Comparison(Rel.UNDECIDED, precision_reached=term_cap), None


def zeta_compare_threshold(
    s, x: Fraction, term_cap: int = ZETA_TERM_CAP, max_refine: int = 10
) -> Comparison:
    """Certified comparison zeta(s) vs x, refining the enclosure as needed."""
    return _zeta_vs_threshold(s, x, term_cap, max_refine)[0]


@dataclass(frozen=True)
class ZetaThreshold:
    s: Exponent
    enclosure: ZetaEnclosure
    threshold: Fraction


def solve_zeta_threshold(
    x, integer_only: bool = True, s_cap: int = 512, real_width: Fraction = Fraction(1, 10 ** 6)
) -> ZetaThreshold:
    """Smallest s with zeta(s) < x, certified by enclosures.

    Integer mode returns the minimal integer s >= 2. Real mode additionally
    bisects (to `real_width`) inside the bracketing unit interval and returns
    a rational s whose enclosure certifies zeta(s) < x.
    """
    x = Fraction(x)
    if x <= 1:
        raise DomainError("threshold must exceed 1")
    s_int = cert_enc = None
    for s in range(2, s_cap + 1):
        c, enc = _zeta_vs_threshold(s, x)
        if c.rel is Rel.LESS:
            s_int, cert_enc = s, enc
            break
        if c.rel is Rel.UNDECIDED:
            raise PrecisionError(f"zeta({s}) vs {x} undecided at the term cap")
    if s_int is None:
        raise PrecisionError(f"no integer s <= {s_cap} with zeta(s) < {x}")
    if integer_only:
        return ZetaThreshold(Exponent(s_int), cert_enc, x)

    lo_s = Fraction(max(s_int - 1, 1))  # zeta(lo_s) >= x (or lo_s == 1)
    hi_s = Fraction(s_int)
    hi_exp, hi_enc = Exponent(s_int), cert_enc
    while hi_s - lo_s > real_width:
        mid = (lo_s + hi_s) / 2
        c, enc = _zeta_vs_threshold(Exponent(mid.numerator, mid.denominator), x)
        if c.rel is Rel.LESS:
            hi_s = mid
            hi_exp, hi_enc = Exponent(mid.numerator, mid.denominator), enc
        elif c.rel is Rel.GREATER:
            lo_s = mid
        else:
            break  # near the exact solution; current hi_s already certifies
    return ZetaThreshold(hi_exp, hi_enc, x)
