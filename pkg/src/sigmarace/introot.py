"""Exact integer roots and directed fixed-point power bounds.

Everything rigorous in this package bottoms out here: `iroot` returns the
exact floor of an integer n-th root, and the *_bounds helpers return integer
pairs (lo, hi) with lo <= 2^q * true_value <= hi. No floating point is
involved, so the bounds are unconditional.

gmpy2 provides the fast root kernels; `iroot_py` is a pure-Python Newton
fallback that stays available both as a safety net and as an independent
cross-check in the test suite.
"""

from __future__ import annotations

from math import isqrt

try:
    import gmpy2

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _HAVE_GMPY2 = False


def iroot_py(x: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of x >= 0 by Newton iteration, plus exactness."""
    if x < 0:
        raise ValueError("iroot of negative value")
    if k < 1:
        raise ValueError("root order must be >= 1")
    if k == 1 or x in (0, 1):
        return x, True
    if k == 2:
        r = isqrt(x)
        return r, r * r == x
    # Seed from the bit length: 2^ceil(bits/k) >= x^(1/k).
    r = 1 << -(-x.bit_length() // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    # r is now >= floor(x^(1/k)); correct downward if the seed overshot.
    while r ** k > x:
        r -= 1
    return r, r ** k == x


if _HAVE_GMPY2:

    def iroot(x: int, k: int) -> tuple[int, bool]:
        """Floor of the k-th root of x >= 0, plus an exactness flag."""
        if k == 2:
            r = isqrt(x)
            return r, r * r == x
        if k == 1:
            return x, True
        r, exact = gmpy2.iroot(x, k)
        return int(r), bool(exact)

else:  # pragma: no cover
    iroot = iroot_py


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def scaled_root_bounds(x: int, k: int, q: int) -> tuple[int, int]:
    """Integer (lo, hi) with lo <= 2^q * x^(1/k) <= hi and hi - lo <= 1."""
    r, exact = iroot(x << (q * k), k)
    return r, r if exact else r + 1


def pow_bounds(num: int, den: int, u: int, v: int, q: int) -> tuple[int, int]:
    """Directed bounds on (num/den)^(u/v) at scale 2^q.

    Requires num >= 0, den >= 1, v >= 1; u may be negative (then num > 0).
    Returns (lo, hi) with lo <= 2^q * (num/den)^(u/v) <= hi.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    if num < 0:
        raise ValueError("base must be nonnegative")
    if u < 0:
        if num == 0:
            raise ValueError("0 to a negative power")
        num, den, u = den, num, -u
    if u == 0 or num == den:
        return 1 << q, 1 << q
    if num == 0:
        return 0, 0
    a, b = num ** u, den ** u
    if v == 1:
        x = a << q
        return x // b, ceil_div(x, b)
    shifted = a << (q * v)
    lo_rad = shifted // b
    lo, _ = iroot(lo_rad, v)
    if lo_rad * b == shifted:
        hi_rad = lo_rad
        r, exact = lo, lo ** v == lo_rad
    else:
        hi_rad = lo_rad + 1
        r, exact = iroot(hi_rad, v)
    hi = r if (exact and hi_rad * b == shifted) else r + 1
    return lo, hi


def decimal_string(scaled: int, q: int, digits: int = 18) -> str:
    """Deterministic decimal rendering of scaled / 2^q, truncated."""
    if scaled < 0:
        return "-" + decimal_string(-scaled, q, digits)
    ip = scaled >> q
    frac = scaled - (ip << q)
    out = (frac * 10 ** digits) >> q
    return f"{ip}.{out:0{digits}d}"
