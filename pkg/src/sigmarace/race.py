"""Sign-change searches and race statistics for sigma_s(an+b) vs sigma_s(cn+d).

Every reported sign is certified: integer exponents compare exactly, others
through directed bounds with precision escalation. A comparison that stays
undecided at the cap aborts the run loudly rather than guessing.

Scans are chunked; chunks can run in parallel worker processes and the merged
result is defined purely by chunk order, so parallel and serial runs agree
bit for bit.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .config import RunConfig
from .errors import DomainError, UndecidedComparisonError
from .factorize import factorize
from .numerics import DEFAULT_PREC, Exponent, ScalarValue
from .progression import (
    ProgressionSpec,
    SieveContext,
    chunk_members_for,
    factor_chunk,
    iter_chunks,
)
from .sigma import make_comparator, sigma_s


class Direction(enum.Enum):
    GT = "gt"  # crossing / invariant is: left > right
    LT = "lt"  # crossing / invariant is: left < right

    @property
    def sign(self) -> int:
        return 1 if self is Direction.GT else -1


@dataclass(frozen=True)
class RaceSpec:
    """The race sigma_s(a*n+b) vs sigma_s(c*n+d) with a comparison direction."""

    a: int
    b: int
    c: int
    d: int
    s: Exponent
    direction: Direction = Direction.GT

    def __post_init__(self):
        if self.a < 1 or self.c < 1:
            raise DomainError("race requires a >= 1 and c >= 1")
        if self.b < 0 or self.d < 0:
            raise DomainError("race offsets must be nonnegative")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def classification(self) -> str:
        return "ad=bc" if self.det == 0 else "ad!=bc"

    @property
    def left(self) -> ProgressionSpec:
        return ProgressionSpec(self.a, self.b)

    @property
    def right(self) -> ProgressionSpec:
        return ProgressionSpec(self.c, self.d)


@dataclass(frozen=True)
class ConditionAReport:
    a: int
    b: int
    c: int
    d: int
    det: int
    satisfied: bool
    ad_eq_bc: bool
    linearly_independent: bool
    violations: tuple[str, ...]


def check_condition_A(a: int, b: int, c: int, d: int) -> ConditionAReport:
    """Which clauses of condition (A) hold for (a, b, c, d)."""
    violations = []
    if min(a, b, c, d) < 0:
        violations.append("negative entry")
    if a <= 0:
        violations.append("a = 0")
    if c <= 0:
        violations.append("c = 0")
    det = a * d - b * c
    ad_eq_bc = det == 0
    if ad_eq_bc:
        violations.append("ad = bc")
    return ConditionAReport(
        a,
        b,
        c,
        d,
        det,
        satisfied=not violations,
        ad_eq_bc=ad_eq_bc,
        linearly_independent=not ad_eq_bc,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# Chunk engine


class _Mode(enum.Enum):
    CROSS = "cross"
    SCAN = "scan"
    STATS = "stats"


@dataclass
class _ChunkOutcome:
    n0: int
    n1: int
    lt: int = 0
    eq: int = 0
    gt: int = 0
    event_n: int | None = None
    event_kind: str | None = None  # crossing | violation | undecided
    max_prec: int = 0
    sum_left: object = 0
    sum_right: object = 0
    harm_lt: Fraction = field(default_factory=lambda: Fraction(0))
    harm_gt: Fraction = field(default_factory=lambda: Fraction(0))


def _scan_chunk(
    spec: RaceSpec,
    n0: int,
    n1: int,
    mode: _Mode,
    config: RunConfig,
    ctx_left: SieveContext | None = None,
    ctx_right: SieveContext | None = None,
    comparator=None,
) -> _ChunkOutcome:
    ctx_left = ctx_left or SieveContext(spec.left, n1 - 1)
    ctx_right = ctx_right or SieveContext(spec.right, n1 - 1)
    cmp_obj = comparator or make_comparator(
        spec.s, config.base_screen_bits, config.escalation_cap
    )
    L = factor_chunk(spec.left, n0, n1, ctx_left)
    R = factor_chunk(spec.right, n0, n1, ctx_right)
    out = _ChunkOutcome(n0, n1)
    target = spec.direction.sign
    compare = cmp_obj.compare
    memL, facL, resL = L.members, L.smalls, L.residuals
    memR, facR, resR = R.members, R.smalls, R.residuals
    stats = mode is _Mode.STATS
    want_sums = stats and spec.s.is_integer
    if want_sums:
        value_fn = _integer_value_fn(cmp_obj, spec.s)
    for i in range(n1 - n0):
        sign = compare(memL[i], facL[i], resL[i], memR[i], facR[i], resR[i])
        if sign is None:
            out.event_n = n0 + i
            out.event_kind = "undecided"
            break
        if sign < 0:
            out.lt += 1
        elif sign > 0:
            out.gt += 1
        else:
            out.eq += 1
        if stats:
            n = n0 + i
            if sign < 0:
                out.harm_lt += Fraction(1, n)
            elif sign > 0:
                out.harm_gt += Fraction(1, n)
            if want_sums:
                out.sum_left += value_fn(memL[i], facL[i], resL[i])
                out.sum_right += value_fn(memR[i], facR[i], resR[i])
        elif mode is _Mode.CROSS:
            if sign == target:
                out.event_n = n0 + i
                out.event_kind = "crossing"
                break
        else:  # constancy scan: anything but a strict target sign violates
            if sign != target:
                out.event_n = n0 + i
                out.event_kind = "violation"
                break
    out.max_prec = getattr(cmp_obj, "max_prec_used", 0)
    return out


def _integer_value_fn(cmp_obj, s: Exponent):
    if s.num >= 0:
        return cmp_obj.value

    def _value(m, facs, r):
        t = -s.num
        return Fraction(cmp_obj._pos.value(m, facs, r), m ** t)

    return _value


def _chunk_worker(payload) -> _ChunkOutcome:
    spec_tuple, n0, n1, mode_value, config = payload
    a, b, c, d, s_num, s_den, dir_value = spec_tuple
    spec = RaceSpec(a, b, c, d, Exponent(s_num, s_den), Direction(dir_value))
    return _scan_chunk(spec, n0, n1, _Mode(mode_value), config)


def _run_chunks(
    spec: RaceSpec, n_lo: int, n_hi: int, mode: _Mode, config: RunConfig
) -> list[_ChunkOutcome]:
    """Ordered chunk outcomes, cut at (and including) the first event chunk."""
    chunk_len = chunk_members_for(max(spec.a, spec.c), config.segment_size)
    tasks = list(iter_chunks(n_lo, n_hi, chunk_len))
    outcomes: list[_ChunkOutcome] = []
    if config.parallelism <= 1 or len(tasks) <= 1:
        ctx_left = SieveContext(spec.left, n_hi)
        ctx_right = SieveContext(spec.right, n_hi)
        comparator = make_comparator(
            spec.s, config.base_screen_bits, config.escalation_cap
        )
        for n0, n1 in tasks:
            out = _scan_chunk(
                spec, n0, n1, mode, config, ctx_left, ctx_right, comparator
            )
            outcomes.append(out)
            if out.event_n is not None:
                break
        return outcomes

    spec_tuple = (
        spec.a,
        spec.b,
        spec.c,
        spec.d,
        spec.s.num,
        spec.s.den,
        spec.direction.value,
    )
    wave = config.parallelism * 2
    with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
        stop = False
        for w0 in range(0, len(tasks), wave):
            batch = tasks[w0 : w0 + wave]
            futures = [
                pool.submit(
                    _chunk_worker, (spec_tuple, n0, n1, mode.value, config)
                )
                for n0, n1 in batch
            ]
            for fut in futures:
                out = fut.result()
                if not stop:
                    outcomes.append(out)
                    if out.event_n is not None:
                        stop = True
            if stop:
                break
    return outcomes


def _merge_counts(outcomes) -> tuple[int, int, int, int]:
    lt = eq = gt = prec = 0
    for out in outcomes:
        lt += out.lt
        eq += out.eq
        gt += out.gt
        prec = max(prec, out.max_prec)
    return lt, eq, gt, prec


# ---------------------------------------------------------------------------
# Public results


@dataclass(frozen=True)
class CrossingResult:
    n: int
    left: ScalarValue
    right: ScalarValue
    precision_used: int
    undecided_skips: tuple[int, ...] = ()
    counts_before: tuple[int, int, int] = (0, 0, 0)  # lt, eq, gt for n' < n


@dataclass(frozen=True)
class ConstancyReport:
    holds: bool
    first_violation: int | None
    checked_limit: int
    counts: tuple[int, int, int]
    precision_used: int


@dataclass(frozen=True)
class RaceStats:
    limit: int
    count_lt: int
    count_eq: int
    count_gt: int
    sum_left: object  # int or Fraction (integer s only), else None
    sum_right: object
    harm_lt: Fraction
    harm_gt: Fraction


def _sigma_value_at(spec: RaceSpec, n: int, prec: int) -> tuple[ScalarValue, ScalarValue]:
    left = sigma_s(factorize(spec.a * n + spec.b), spec.s, prec)
    right = sigma_s(factorize(spec.c * n + spec.d), spec.s, prec)
    return left, right


def _raise_undecided(out: _ChunkOutcome, config: RunConfig):
    raise UndecidedComparisonError(out.event_n, config.escalation_cap)


def first_crossing(
    spec: RaceSpec, limit: int, config: RunConfig | None = None
) -> CrossingResult | None:
    """Smallest n <= limit with the strict direction inequality certified.

    All smaller n are certified non-crossings (equalities are tallied, never
    treated as crossings). Returns None when no crossing occurs by `limit`.
    """
    config = config or RunConfig()
    if limit < 1:
        raise DomainError("limit must be >= 1")
    outcomes = _run_chunks(spec, 1, limit, _Mode.CROSS, config)
    last = outcomes[-1]
    if last.event_kind == "undecided":
        _raise_undecided(last, config)
    lt, eq, gt, prec = _merge_counts(outcomes)
    if last.event_kind != "crossing":
        return None
    n = last.event_n
    # The crossing itself was tallied; counts_before excludes it.
    if spec.direction is Direction.GT:
        gt -= 1
    else:
        lt -= 1
    prec = max(prec, DEFAULT_PREC)
    left, right = _sigma_value_at(spec, n, prec)
    return CrossingResult(
        n, left, right, precision_used=prec, counts_before=(lt, eq, gt)
    )


def scan_constancy(
    spec: RaceSpec, limit: int, config: RunConfig | None = None
) -> ConstancyReport:
    """Certify the strict direction inequality for every n <= limit."""
    config = config or RunConfig()
    if limit < 1:
        raise DomainError("limit must be >= 1")
    outcomes = _run_chunks(spec, 1, limit, _Mode.SCAN, config)
    last = outcomes[-1]
    if last.event_kind == "undecided":
        _raise_undecided(last, config)
    lt, eq, gt, prec = _merge_counts(outcomes)
    violation = last.event_n if last.event_kind == "violation" else None
    return ConstancyReport(
        holds=violation is None,
        first_violation=violation,
        checked_limit=limit,
        counts=(lt, eq, gt),
        precision_used=max(prec, DEFAULT_PREC),
    )


def race_stats(
    spec: RaceSpec, limit: int, config: RunConfig | None = None
) -> RaceStats:
    """Certified tallies of sign(Delta_s(n)) for n <= limit, plus exact sums.

    Partial sums are exact and only defined for integer s; harmonic sums are
    exact Fractions (their cost grows quickly with the limit).
    """
    config = config or RunConfig()
    if limit < 1:
        raise DomainError("limit must be >= 1")
    outcomes = _run_chunks(spec, 1, limit, _Mode.STATS, config)
    for out in outcomes:
        if out.event_kind == "undecided":
            _raise_undecided(out, config)
    lt, eq, gt, _ = _merge_counts(outcomes)
    integer_s = spec.s.is_integer
    sum_left = sum(out.sum_left for out in outcomes) if integer_s else None
    sum_right = sum(out.sum_right for out in outcomes) if integer_s else None
    harm_lt = sum((out.harm_lt for out in outcomes), Fraction(0))
    harm_gt = sum((out.harm_gt for out in outcomes), Fraction(0))
    return RaceStats(limit, lt, eq, gt, sum_left, sum_right, harm_lt, harm_gt)


def sign_at(spec: RaceSpec, n: int, config: RunConfig | None = None) -> int:
    """Certified sign of sigma_s(an+b) - sigma_s(cn+d) at a single n."""
    config = config or RunConfig()
    cmp_obj = make_comparator(spec.s, config.base_screen_bits, config.escalation_cap)
    mL, mR = spec.a * n + spec.b, spec.c * n + spec.d
    fL, fR = factorize(mL), factorize(mR)
    sign = cmp_obj.compare(mL, list(fL.factors), 1, mR, list(fR.factors), 1)
    if sign is None:
        raise UndecidedComparisonError(n, config.escalation_cap)
    return sign


def sample_rows(
    spec: RaceSpec, n_lo: int, n_hi: int, config: RunConfig | None = None
) -> list[tuple[int, ScalarValue, ScalarValue, int]]:
    """(n, left, right, sign) rows for small inspection ranges."""
    config = config or RunConfig()
    if n_hi - n_lo > 100_000:
        raise DomainError("row emission is meant for small ranges")
    cmp_obj = make_comparator(spec.s, config.base_screen_bits, config.escalation_cap)
    ctxL = SieveContext(spec.left, n_hi)
    ctxR = SieveContext(spec.right, n_hi)
    rows = []
    for n0, n1 in iter_chunks(n_lo, n_hi, chunk_members_for(max(spec.a, spec.c))):
        L = factor_chunk(spec.left, n0, n1, ctxL)
        R = factor_chunk(spec.right, n0, n1, ctxR)
        for i in range(n1 - n0):
            sign = cmp_obj.compare(
                L.members[i], L.smalls[i], L.residuals[i],
                R.members[i], R.smalls[i], R.residuals[i],
            )
            if sign is None:
                raise UndecidedComparisonError(n0 + i, config.escalation_cap)
            left, right = _sigma_value_at(spec, n0 + i, config.precision)
            rows.append((n0 + i, left, right, sign))
    return rows


# ---------------------------------------------------------------------------
# Paper-style tables

G_TABLE_SPEC = (6, 1, 6, 0)
H_TABLE_SPEC = (5, 1, 2, 29999)
DEFAULT_G_LIMIT = 8_000_000
DEFAULT_H_LIMIT = 12_000
DEFAULT_SCAN_LIMIT_INT = 10_000_000
DEFAULT_CROSS_LIMIT_HALF = 3_000_000


def table_g(
    k_values=range(2, 11),
    limit: int = DEFAULT_G_LIMIT,
    config: RunConfig | None = None,
) -> dict[int, int | None]:
    """k -> first n with sigma_{(k-1)/k}(6n+1) > sigma_{(k-1)/k}(6n)."""
    out = {}
    for k in k_values:
        if not 2 <= k:
            raise DomainError("k must be >= 2")
        spec = RaceSpec(*G_TABLE_SPEC, s=Exponent(k - 1, k), direction=Direction.GT)
        res = first_crossing(spec, limit, config)
        out[k] = res.n if res else None
    return out


def table_h(
    s_values=range(2, 17),
    limit: int = DEFAULT_H_LIMIT,
    config: RunConfig | None = None,
) -> dict[int, int | None]:
    """s -> first n with sigma_s(5n+1) > sigma_s(2n+29999)."""
    out = {}
    for s in s_values:
        s_exp = s if isinstance(s, Exponent) else Exponent(int(s))
        if s_exp.value <= 1:
            raise DomainError("h table requires s > 1")
        spec = RaceSpec(*H_TABLE_SPEC, s=s_exp, direction=Direction.GT)
        res = first_crossing(spec, limit, config)
        out[int(s_exp.num) if s_exp.is_integer else s_exp] = res.n if res else None
    return out
