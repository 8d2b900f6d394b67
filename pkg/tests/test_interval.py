"""Interval arithmetic against a 60-digit mpmath oracle."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pframe.interval import Interval, poly_eval, poly_range

mpmath.mp.dps = 60

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-6, max_value=1e3, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0)


def _iv(a, b):
    return Interval(min(a, b), max(a, b))


def _pick(iv: Interval, s: float):
    # point inside the interval, formed exactly then rounded inward to 60 digits
    exact = Fraction(iv.lo) + (Fraction(iv.hi) - Fraction(iv.lo)) * Fraction(s)
    v = mpmath.mpf(exact.numerator) / exact.denominator
    return min(max(v, mpmath.mpf(iv.lo)), mpmath.mpf(iv.hi))


def _inside(iv: Interval, v) -> bool:
    return mpmath.mpf(iv.lo) <= v <= mpmath.mpf(iv.hi)


@given(finite, finite, finite, finite, unit, unit)
def test_add_sub_mul_contain(a, b, c, d, s, t):
    x, y = _iv(a, b), _iv(c, d)
    px, py = _pick(x, s), _pick(y, t)
    assert _inside(x + y, px + py)
    assert _inside(x - y, px - py)
    assert _inside(x * y, px * py)


@given(finite, finite, positive, positive, unit, unit)
def test_div_contains(a, b, c, d, s, t):
    x, y = _iv(a, b), _iv(c, d)
    px, py = _pick(x, s), _pick(y, t)
    assert _inside(x / y, px / py)


@given(positive, positive, unit)
def test_sqrt_log_exp_contain(a, b, s):
    x = _iv(a, b)
    px = _pick(x, s)
    assert _inside(x.sqrt(), mpmath.sqrt(px))
    assert _inside(x.log(), mpmath.log(px))
    small = _iv(a / 1e3, b / 1e3)
    ps = _pick(small, s)
    assert _inside(small.exp(), mpmath.exp(ps))


@given(st.floats(min_value=0.0, max_value=2.0), st.floats(min_value=0.0, max_value=2.0),
       st.floats(min_value=0.1, max_value=12.0), unit)
def test_real_power_contains(a, b, p, s):
    x = _iv(a, b)
    px = _pick(x, s)
    assert _inside(x.rpow(p), mpmath.power(px, mpmath.mpf(p)))


moderate = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


@given(moderate, moderate, st.integers(min_value=0, max_value=9), unit)
def test_integer_power_contains(a, b, n, s):
    x = _iv(a, b)
    px = _pick(x, s)
    assert _inside(x ** n, px ** n)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=97), min_size=1, max_size=8),
       st.floats(min_value=-1, max_value=1), st.floats(min_value=-1, max_value=1), unit)
def test_polynomial_range_contains(coeffs, a, b, s):
    x = _iv(a, b)
    px = _pick(x, s)
    exact = sum(mpmath.mpf(c.numerator) / c.denominator * px**k for k, c in enumerate(coeffs))
    assert _inside(poly_eval(coeffs, x), exact)
    assert _inside(poly_range(coeffs, x, depth=2), exact)


def test_even_power_is_nonnegative():
    assert Interval(-2.0, 1.0) ** 2 == Interval(0.0, 4.0)


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)


def test_from_expr_encloses_surd():
    iv = Interval.from_expr("sqrt(5)")
    assert _inside(iv, mpmath.sqrt(5))
    assert iv.width < 2e-15
    assert Interval.from_expr("1/3").contains(Fraction(1, 3))


def test_point_fraction_is_tight():
    iv = Interval.point(Fraction(1, 10))
    assert iv.lo < Fraction(1, 10) < iv.hi or iv.lo == iv.hi
    assert iv.width <= 2e-17
