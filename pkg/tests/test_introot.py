"""Exact integer roots: the foundation every rigorous bound rests on."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmarace.introot import (
    decimal_string,
    iroot,
    iroot_py,
    pow_bounds,
    scaled_root_bounds,
)


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=1, max_value=12))
def test_iroot_is_floor_root(x, k):
    r, exact = iroot(x, k)
    assert r ** k <= x
    if x > 0:
        assert (r + 1) ** k > x
    assert exact == (r ** k == x)


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=2, max_value=12))
@settings(max_examples=200)
def test_pure_python_fallback_agrees_with_production(x, k):
    assert iroot_py(x, k) == iroot(x, k)


def test_iroot_rejects_bad_orders():
    with pytest.raises(ValueError):
        iroot_py(5, 0)
    with pytest.raises(ValueError):
        iroot_py(-1, 2)


@given(
    st.integers(min_value=1, max_value=10 ** 9),
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=8, max_value=80),
)
@settings(max_examples=150)
def test_scaled_root_bounds_bracket(x, k, q):
    lo, hi = scaled_root_bounds(x, k, q)
    # lo <= 2^q * x^(1/k) <= hi, checked in integers: lo^k <= x*2^(qk) <= hi^k
    assert lo ** k <= x << (q * k) <= hi ** k
    assert hi - lo <= 1


@given(
    st.integers(min_value=1, max_value=10 ** 6),
    st.integers(min_value=1, max_value=10 ** 6),
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=10),
    st.integers(min_value=16, max_value=64),
)
@settings(max_examples=200)
def test_pow_bounds_bracket_true_power(num, den, u, v, q):
    if u < 0 and num == 0:
        return
    lo, hi = pow_bounds(num, den, u, v, q)
    assert lo <= hi
    # Verify lo^v <= (num/den)^u * 2^(qv) <= hi^v without floating point.
    base = Fraction(num, den) ** u * Fraction(2) ** (q * v)
    assert lo ** v <= base
    assert hi ** v >= base


def test_pow_bounds_exactness_fast_paths():
    q = 32
    one = 1 << q
    assert pow_bounds(4, 1, 1, 2, q) == (2 * one, 2 * one)
    lo, hi = pow_bounds(8, 27, 1, 3, q)
    assert lo <= Fraction(2, 3) * one <= hi and hi - lo <= 1
    assert pow_bounds(5, 5, 7, 3, q) == (one, one)
    assert pow_bounds(3, 1, 0, 5, q) == (one, one)


def test_pow_bounds_rejects_bad_input():
    with pytest.raises(ValueError):
        pow_bounds(1, 0, 1, 2, 16)
    with pytest.raises(ValueError):
        pow_bounds(0, 1, -1, 2, 16)


def test_decimal_string_truncates_deterministically():
    # 3/2 at scale 2^1
    assert decimal_string(3, 1, digits=5) == "1.50000"
    assert decimal_string(-3, 1, digits=3) == "-1.500"
