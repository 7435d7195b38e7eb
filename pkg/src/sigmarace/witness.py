"""Constructive witnesses with machine-checkable certificates.

The central construction engineers an index n so that a*n+b is delta times a
single large prime while c*n+d is divisible by a product of many small primes.
Rational bounds on the two normalized sides then certify a strict sigma_s
comparison without factoring any n-sized number: only delta, the large prime,
and the engineered modulus' primes enter the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .errors import BudgetExhaustedError, DomainError, VerificationError
from .factorize import factorize
from .introot import pow_bounds
from .numerics import DEFAULT_PREC, Exponent, ExponentKind
from .primes import (
    find_prime_in_ap,
    is_probable_prime,
    next_prime,
    nth_prime,
    prime_certainty,
    sieve_primes,
)
from .race import check_condition_A
from .sigma import make_comparator

SCHEMA = "sigma-race/1"


# ---------------------------------------------------------------------------
# Building blocks


@dataclass(frozen=True)
class ModulusInfo:
    k: int
    p_k: int
    c: int
    included: tuple[int, ...]
    m: int


def build_modulus(k: int, c: int) -> ModulusInfo:
    """Product of all primes p <= p_k with p not dividing c."""
    if k < 1:
        raise DomainError("prime index k must be >= 1")
    if c < 1:
        raise DomainError("c must be >= 1")
    p_k = nth_prime(k)
    included = tuple(p for p in sieve_primes(p_k) if c % p != 0)
    return ModulusInfo(k, p_k, c, included, prod(included) if included else 1)


def solve_linear_congruence(c: int, d: int, m: int) -> int:
    """The unique n0 in [0, m) with c*n0 = -d (mod m); requires gcd(c,m) = 1."""
    if m < 1:
        raise DomainError("modulus must be >= 1")
    if m == 1:
        return 0
    if gcd(c, m) != 1:
        raise DomainError(f"gcd({c}, {m}) != 1: congruence has no unique solution")
    return (-d) * pow(c, -1, m) % m


# ---------------------------------------------------------------------------
# Newman-style witness


@dataclass(frozen=True)
class NewmanWitness:
    a: int
    b: int
    c: int
    d: int
    k: int
    p_k: int
    m_k: int
    included_primes: tuple[int, ...]
    n0: int
    t: int
    n: int
    y: int
    delta: int
    A: int
    B: int
    q: int
    q_certainty: str
    D: int

    @property
    def left_value(self) -> int:
        return self.a * self.n + self.b

    @property
    def right_value(self) -> int:
        return self.c * self.n + self.d


def _verify_newman(w: NewmanWitness) -> None:
    bound = abs(w.b * w.c - w.a * w.d)
    checks = [
        (w.c * w.n - w.m_k * w.y == -w.d, "c*n - m_k*y = -d"),
        (w.a * w.n + w.b == w.delta * w.q, "a*n + b = delta*q"),
        (w.delta == gcd(w.a * w.n0 + w.b, w.a * w.m_k), "delta = gcd(a*n0+b, a*m_k)"),
        (gcd(w.A, w.B) == 1, "gcd(A, B) = 1"),
        (w.A + w.B * w.t == w.q, "q = A + B*t"),
        (bound % w.delta == 0, "delta divides bc - ad"),
        (w.q > bound >= w.delta, "q > |bc-ad| >= delta"),
        (w.n >= 1 and w.y >= 1 and w.t >= 1, "positivity"),
        (w.m_k == (prod(w.included_primes) if w.included_primes else 1), "m_k product"),
        (all(w.c % p != 0 for p in w.included_primes), "included primes avoid c"),
        (w.D == 2 * factorize(bound).tau, "D = 2*tau(|ad-bc|)"),
    ]
    for ok, label in checks:
        if not ok:
            raise VerificationError(f"witness invariant failed: {label}")
    for p in sieve_primes(w.p_k):
        if w.c % p != 0 and w.m_k % p != 0:
            raise VerificationError(f"prime {p} missing from m_k")


def construct_newman_witness(
    a: int, b: int, c: int, d: int, k: int, budget: int = 500_000
) -> NewmanWitness:
    """Engineer n with a*n+b = delta*(large prime) and m_k | c*n+d.

    t is the smallest admissible choice, so the output is deterministic.
    """
    report = check_condition_A(a, b, c, d)
    if not report.satisfied:
        raise DomainError(f"condition (A) fails: {', '.join(report.violations)}")
    mod = build_modulus(k, c)
    m_k = mod.m
    n0 = solve_linear_congruence(c, d, m_k)
    delta = gcd(a * n0 + b, a * m_k)
    A = (a * n0 + b) // delta
    B = (a * m_k) // delta
    bound = abs(b * c - a * d)
    t, q = find_prime_in_ap(A, B, lower=bound, budget=budget)
    n = n0 + m_k * t
    y = (c * n + d) // m_k
    witness = NewmanWitness(
        a=a,
        b=b,
        c=c,
        d=d,
        k=k,
        p_k=mod.p_k,
        m_k=m_k,
        included_primes=mod.included,
        n0=n0,
        t=t,
        n=n,
        y=y,
        delta=delta,
        A=A,
        B=B,
        q=q,
        q_certainty=prime_certainty(q),
        D=2 * factorize(bound).tau,
    )
    _verify_newman(witness)
    return witness


# ---------------------------------------------------------------------------
# Ratio certificate


@dataclass(frozen=True)
class Certificate:
    s: Exponent
    prec: int
    upper_left: Fraction  # certified upper bound on sigma_s(an+b)/(an+b)^s
    lower_right: Fraction  # certified lower bound on sigma_s(cn+d)/(cn+d)^s
    ratio_power: Fraction  # certified upper bound on ((an+b)/(cn+d))^s
    ratio_bound: Fraction  # certified upper bound on sigma_s(an+b)/sigma_s(cn+d)
    verdict: str  # CertifiedLess | Inconclusive
    q_certainty: str


def _pow_upper(x_num: int, x_den: int, s: Exponent, q_bits: int) -> Fraction:
    if s.num == 0:
        return Fraction(1)
    _, hi = pow_bounds(x_num, x_den, s.num, s.den, q_bits)
    return Fraction(hi, 1 << q_bits)


def _pow_lower(x_num: int, x_den: int, s: Exponent, q_bits: int) -> Fraction:
    if s.num == 0:
        return Fraction(1)
    lo, _ = pow_bounds(x_num, x_den, s.num, s.den, q_bits)
    return Fraction(lo, 1 << q_bits)


def certify_ratio(w: NewmanWitness, s: Exponent, prec: int = DEFAULT_PREC) -> Certificate:
    """Rational certificate that sigma_s(an+b) < sigma_s(cn+d) at the witness n.

    Valid for 0 <= s <= 1 (s = 0 reduces to the exact divisor-count form).
    CertifiedLess requires ratio_bound < 1 with all roundings outward; the
    check touches only delta, q, and the primes of m_k.
    """
    if s.kind is ExponentKind.REAL:
        raise DomainError("ratio certificates require an integer or small-denominator s")
    if not 0 <= s.value <= 1:
        raise DomainError("ratio certificates cover 0 <= s <= 1")
    qb = prec + 8
    # upper_left = (sum over divisors u of delta of u^-s) * (1 + q^-s), up.
    upper_left = Fraction(0)
    for u in factorize(w.delta).divisors():
        upper_left += _pow_upper(1, u, s, qb)
    upper_left *= 1 + _pow_upper(1, w.q, s, qb)
    # lower_right = prod over primes p | m_k of (1 + p^-s), down.
    lower_right = Fraction(1)
    for p in w.included_primes:
        lower_right *= 1 + _pow_lower(1, p, s, qb)
    left, right = w.left_value, w.right_value
    ratio_power = _pow_upper(left, right, s, qb)
    ratio_bound = upper_left * ratio_power / lower_right
    verdict = "CertifiedLess" if ratio_bound < 1 else "Inconclusive"
    return Certificate(
        s=s,
        prec=prec,
        upper_left=upper_left,
        lower_right=lower_right,
        ratio_power=ratio_power,
        ratio_bound=ratio_bound,
        verdict=verdict,
        q_certainty=w.q_certainty,
    )


@dataclass(frozen=True)
class OmegaCertificate:
    omega_upper_left: int  # >= omega(an+b)
    omega_lower_right: int  # <= omega(cn+d)
    omega_certified: bool
    big_omega_upper_left: int
    big_omega_lower_right: int
    big_omega_certified: bool


def certify_omega(w: NewmanWitness) -> OmegaCertificate:
    """Exact counting certificate for omega/Omega of the two witness sides."""
    f = factorize(abs(w.a * w.d - w.b * w.c))
    omega_ul = 1 + f.omega
    big_ul = 1 + f.big_omega
    lr = len(w.included_primes)
    return OmegaCertificate(
        omega_upper_left=omega_ul,
        omega_lower_right=lr,
        omega_certified=omega_ul < lr,
        big_omega_upper_left=big_ul,
        big_omega_lower_right=lr,
        big_omega_certified=big_ul < lr,
    )


# ---------------------------------------------------------------------------
# Prime triples


@dataclass(frozen=True)
class PrimeTripleWitness:
    s: Exponent
    n_ceil: int
    threshold: int
    p: int
    p_certainty: str
    left_greater: bool  # sigma_s(p-1) > sigma_s(p)
    right_greater: bool  # sigma_s(p+1) > sigma_s(p)


def _ceil_exponent(s: Exponent) -> int:
    return -((-s.num) // s.den)


def _certified_sign(m1: int, m2: int, s: Exponent) -> int:
    """Certified sign of sigma_s(m1) - sigma_s(m2) for small m1, m2."""
    cmp_obj = make_comparator(s)
    f1, f2 = factorize(m1), factorize(m2)
    sign = cmp_obj.compare(m1, list(f1.factors), 1, m2, list(f2.factors), 1)
    if sign is None:
        raise VerificationError(f"comparison sigma_s({m1}) vs sigma_s({m2}) undecided")
    return sign


def prime_triple_witness(
    s: Exponent, count: int = 1, budget: int = 100_000
) -> list[PrimeTripleWitness]:
    """Primes p > 1 + n*2^(n+1) (n = ceil(s)) with sigma_s dipping at p.

    Both comparisons sigma_s(p-1) > sigma_s(p) and sigma_s(p) < sigma_s(p+1)
    are re-verified by direct certified evaluation for every returned p.
    """
    if s.value <= 0:
        raise DomainError("prime-triple construction requires s > 0")
    n = _ceil_exponent(s)
    threshold = 1 + n * 2 ** (n + 1)
    out = []
    p = threshold
    examined = 0
    while len(out) < count:
        p = next_prime(p)
        examined += 1
        if examined > budget:
            raise BudgetExhaustedError(
                f"only {len(out)} of {count} triples within {budget} primes"
            )
        left = _certified_sign(p - 1, p, s)
        right = _certified_sign(p + 1, p, s)
        if left <= 0 or right <= 0:
            raise VerificationError(
                f"triple verification failed at p={p} (should be impossible)"
            )
        out.append(
            PrimeTripleWitness(
                s=s,
                n_ceil=n,
                threshold=threshold,
                p=p,
                p_certainty=prime_certainty(p),
                left_greater=True,
                right_greater=True,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Same-slope construction via CRT


@dataclass(frozen=True)
class CrtWitness:
    a: int
    b: int
    d: int
    swapped: bool
    ell: int
    k: int
    q: int
    p: int
    p_certainty: str
    n: int  # sigma_s(a*n+b) > sigma_s(a*n+d), certified directly
    m: int  # sigma_s(a*m+b) < sigma_s(a*m+d), a*m+b prime
    m_prime: int
    m_prime_certainty: str
    s: Exponent


def smallest_valid_q(a: int, ell: int) -> int:
    q = 2
    while a * ell % q == 0:
        q = next_prime(q)
    return q


def crt_witness(
    a: int,
    b: int,
    d: int,
    s: Exponent,
    q: int | None = None,
    budget: int = 500_000,
) -> CrtWitness:
    """Both race directions on the same slope: a*n+b vs a*n+d.

    Returns the smallest m with a*m+b prime (so the b-side loses there) and a
    CRT-engineered n where the b-side provably wins; both comparisons are
    certified by direct evaluation.
    """
    if a < 1:
        raise DomainError("slope a must be >= 1")
    if b < 0 or d < 0 or b == d:
        raise DomainError("offsets must be distinct nonnegative integers")
    if gcd(a, b) != 1 or gcd(a, d) != 1:
        raise DomainError("need gcd(a, b) = gcd(a, d) = 1")
    if s.value <= 0:
        raise DomainError("construction requires s > 0")
    swapped = b > d
    if swapped:
        b, d = d, b
    ell = d - b
    k = _ceil_exponent(s)
    if q is None:
        q = smallest_valid_q(a, ell)
    if not is_probable_prime(q) or (a * ell) % q == 0:
        raise DomainError(f"auxiliary q={q} must be a prime not dividing a*ell")

    # x = ell (mod q), x = d (mod a); gcd(a, q)=1 since q is prime, q∤a.
    if a == 1:
        x0 = ell % q
    else:
        t0 = (d - ell) * pow(q, -1, a) % a
        x0 = (ell + q * t0) % (a * q)
    threshold = max(d, ell + ell * k * q ** (k + 1))
    _, p = find_prime_in_ap(x0, a * q, lower=threshold, budget=budget)
    n = (p - d) // a
    if a * n + d != p or (a * n + b) % q != 0 or (p - ell) != a * n + b:
        raise VerificationError("CRT witness congruences failed")
    if _certified_sign(a * n + b, a * n + d, s) <= 0:
        raise VerificationError("CRT witness direct verification failed")

    m = None
    for cand in range(1, budget + 1):
        if is_probable_prime(a * cand + b):
            m = cand
            break
    if m is None:
        raise BudgetExhaustedError("no m <= budget with a*m+b prime")
    if _certified_sign(a * m + b, a * m + d, s) >= 0:
        raise VerificationError("prime-side direct verification failed")
    return CrtWitness(
        a=a,
        b=b,
        d=d,
        swapped=swapped,
        ell=ell,
        k=k,
        q=q,
        p=p,
        p_certainty=prime_certainty(p),
        n=n,
        m=m,
        m_prime=a * m + b,
        m_prime_certainty=prime_certainty(a * m + b),
        s=s,
    )


# ---------------------------------------------------------------------------
# The explicit 1116-digit index


@dataclass(frozen=True)
class MartinNumber:
    z: int
    n: int
    digit_count: int
    z_mod_30: int


def martin_number() -> MartinNumber:
    """z = (prod of the 4th..383rd primes) * p_385 * p_388; n = (z-1)/30."""
    ps = sieve_primes(nth_prime(388))
    z = prod(ps[3:383]) * ps[384] * ps[387]
    if z % 30 != 1:
        raise VerificationError("z is not 1 mod 30")
    n = (z - 1) // 30
    return MartinNumber(z=z, n=n, digit_count=len(str(n)), z_mod_30=z % 30)
