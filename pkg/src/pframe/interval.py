"""Directed-rounding interval arithmetic.

Rounding is made outward by stepping to the adjacent representable float
after each operation, unless an error-free transformation shows the float
result is already exact. No global rounding-mode switching is involved, so
values are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

INF = math.inf
_SPLITTER = 134217729.0  # 2**27 + 1
_TINY = 2.0 ** -960  # below this the product error term may underflow
# libm pow/exp/log are not guaranteed correctly rounded; pad by a few ulps.
_TRANSCENDENTAL_ULPS = 4


def _down(x: float) -> float:
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    return math.nextafter(x, INF)


def _down_n(x: float, n: int) -> float:
    for _ in range(n):
        x = math.nextafter(x, -INF)
    return x


def _up_n(x: float, n: int) -> float:
    for _ in range(n):
        x = math.nextafter(x, INF)
    return x


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    # Dekker splitting is exact only away from overflow and underflow
    if not math.isfinite(p) or abs(a) > 1e300 or abs(b) > 1e300 or abs(p) < _TINY:
        return p, math.nan
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _add_lo(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return s if not math.isnan(s) else -INF
    return _down(s) if e < 0 else s


def _add_hi(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return s if not math.isnan(s) else INF
    return _up(s) if e > 0 else s


def _mul_pair(a: float, b: float) -> tuple[float, float]:
    """Enclosure [lo, hi] of the exact product a*b (0*inf taken as 0)."""
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    p, e = _two_prod(a, b)
    if math.isinf(p):
        return p, p
    if math.isnan(e):
        return _down(p), _up(p)
    if e == 0.0:
        return p, p
    return (p, _up(p)) if e > 0 else (_down(p), p)


def _div_pair(a: float, b: float) -> tuple[float, float]:
    if a == 0.0:
        return 0.0, 0.0
    if math.isinf(a) or math.isinf(b):
        q = a / b
        return q, q
    q = a / b
    # residual sign of a - q*b decides the rounding direction
    p, e = _two_prod(q, b)
    if math.isnan(e):
        return _down(q), _up(q)
    r = (a - p) - e
    if r == 0.0:
        return q, q
    if (r > 0) == (b > 0):
        return q, _up(q)
    return _down(q), q


def _exact_float_bounds(value: Fraction) -> tuple[float, float]:
    f = float(value)
    back = Fraction(f)
    if back == value:
        return f, f
    if back < value:
        return f, _up(f)
    return _down(f), f


Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of reals with float endpoints."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # -- construction -------------------------------------------------------
    @classmethod
    def point(cls, x: Number) -> "Interval":
        if isinstance(x, Fraction):
            return cls(*_exact_float_bounds(x))
        if isinstance(x, int):
            return cls(*_exact_float_bounds(Fraction(x)))
        x = float(x)
        return cls(x, x)

    @classmethod
    def hull(cls, values: Iterable["Interval | Number"]) -> "Interval":
        items = [as_interval(v) for v in values]
        return cls(min(v.lo for v in items), max(v.hi for v in items))

    @classmethod
    def from_expr(cls, expr, digits: int = 60) -> "Interval":
        """Enclosure of an exact sympy expression (rational or surd)."""
        import sympy

        expr = sympy.sympify(expr)
        if expr.is_Rational:
            return cls.point(Fraction(int(expr.p), int(expr.q)))
        val = sympy.Rational(expr.evalf(digits))
        f_lo, f_hi = _exact_float_bounds(Fraction(int(val.p), int(val.q)))
        return cls(_down(f_lo), _up(f_hi))

    # -- properties ---------------------------------------------------------
    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return 0.0 if self.lo < 0 < self.hi else (self.lo if math.isfinite(self.lo) else self.hi)
        return self.lo + (self.hi - self.lo) / 2

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x: "Interval | Number") -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi) if math.isfinite(self.lo) and math.isfinite(self.hi) else self.lo <= float(x) <= self.hi
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def to_json(self) -> list[str]:
        return [repr(self.lo), repr(self.hi)]

    @classmethod
    def from_json(cls, pair: Sequence) -> "Interval":
        return cls(float(pair[0]), float(pair[1]))

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = as_interval(other)
        return Interval(_add_lo(self.lo, o.lo), _add_hi(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = as_interval(other)
        return Interval(_add_lo(self.lo, -o.hi), _add_hi(self.hi, -o.lo))

    def __rsub__(self, other) -> "Interval":
        return as_interval(other) - self

    def __mul__(self, other) -> "Interval":
        o = as_interval(other)
        los, his = [], []
        for a in (self.lo, self.hi):
            for b in (o.lo, o.hi):
                lo, hi = _mul_pair(a, b)
                los.append(lo)
                his.append(hi)
        return Interval(min(los), max(his))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = as_interval(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        los, his = [], []
        for a in (self.lo, self.hi):
            for b in (o.lo, o.hi):
                lo, hi = _div_pair(a, b)
                los.append(lo)
                his.append(hi)
        return Interval(min(los), max(his))

    def __rtruediv__(self, other) -> "Interval":
        return as_interval(other) / self

    def __pow__(self, n) -> "Interval":
        if isinstance(n, int) and not isinstance(n, bool):
            return self.ipow(n)
        return self.rpow(n)

    def ipow(self, n: int) -> "Interval":
        """Integer power with the even-power tightening."""
        if n < 0:
            return Interval.point(1) / self.ipow(-n)
        if n == 0:
            return Interval(1.0, 1.0)
        result = Interval(1.0, 1.0)
        base = self
        if n % 2 == 0 and self.lo < 0 < self.hi:
            base = Interval(0.0, self.mag)
        elif n % 2 == 0 and self.hi <= 0:
            base = -self
        k = n
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        if n % 2 == 0 and result.lo < 0:
            result = Interval(0.0, result.hi)
        return result

    def rpow(self, y: "Interval | Number") -> "Interval":
        """x**y for x within [0, inf) and a real (or interval) exponent."""
        if self.lo < 0:
            raise ValueError("real power requires a nonnegative base interval")
        y = as_interval(y)
        if y.lo == y.hi and float(y.lo).is_integer() and y.lo >= 0:
            return self.ipow(int(y.lo))
        los, his = [], []
        for a in (self.lo, self.hi):
            for b in (y.lo, y.hi):
                lo, hi = _pow_pair(a, b)
                los.append(lo)
                his.append(hi)
        lo, hi = min(los), max(his)
        if y.lo < 0 < y.hi:
            # x**0 == 1 is an interior critical value in the exponent
            lo, hi = min(lo, 1.0), max(hi, 1.0)
        return Interval(max(lo, 0.0), hi)

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        lo = math.sqrt(self.lo)
        hi = math.sqrt(self.hi)
        lo = lo if Fraction(lo) ** 2 == Fraction(self.lo) else _down(lo)
        hi = hi if Fraction(hi) ** 2 == Fraction(self.hi) else _up(hi)
        return Interval(max(lo, 0.0), hi)

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise ValueError("log of an interval touching 0")
        return Interval(
            _down_n(math.log(self.lo), _TRANSCENDENTAL_ULPS),
            _up_n(math.log(self.hi), _TRANSCENDENTAL_ULPS) if math.isfinite(self.hi) else INF,
        )

    def exp(self) -> "Interval":
        lo = 0.0 if self.lo == -INF else max(0.0, _down_n(math.exp(self.lo), _TRANSCENDENTAL_ULPS))
        try:
            hi = _up_n(math.exp(self.hi), _TRANSCENDENTAL_ULPS)
        except OverflowError:
            hi = INF
        return Interval(lo, hi)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, self.mag)

    def max0(self) -> "Interval":
        """Enclosure of max(0, x)."""
        return Interval(max(0.0, self.lo), max(0.0, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"


def _pow_pair(a: float, b: float) -> tuple[float, float]:
    if a == 0.0:
        if b > 0:
            return 0.0, 0.0
        if b == 0:
            return 1.0, 1.0
        return INF, INF
    if math.isinf(a):
        if b > 0:
            return INF, INF
        if b == 0:
            return 1.0, 1.0
        return 0.0, 0.0
    if b == 0.0 or a == 1.0:
        return 1.0, 1.0
    try:
        v = math.pow(a, b)
    except OverflowError:
        return _down(1.7976931348623157e308), INF
    if v == 0.0:
        return 0.0, math.ulp(0.0) * 2 ** _TRANSCENDENTAL_ULPS
    return max(0.0, _down_n(v, _TRANSCENDENTAL_ULPS)), _up_n(v, _TRANSCENDENTAL_ULPS)


def as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def hull_pair(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


# -- polynomials with interval coefficients ---------------------------------

def poly_eval(coeffs: Sequence, x) -> Interval:
    """Horner enclosure; coefficients ordered by increasing degree."""
    x = as_interval(x)
    acc = Interval(0.0, 0.0)
    for c in reversed(coeffs):
        acc = acc * x + as_interval(c)
    return acc


def poly_derivative(coeffs: Sequence) -> list:
    return [as_interval(c) * k for k, c in enumerate(coeffs)][1:] or [Interval(0.0, 0.0)]


def poly_range(coeffs: Sequence, x: Interval, depth: int = 0) -> Interval:
    """Enclosure of a polynomial's range over x, refined on 2**depth cells.

    Each cell takes the tighter of Horner and the mean-value form.
    """
    coeffs = [as_interval(c) for c in coeffs]
    dcoeffs = poly_derivative(coeffs)
    cells = [x]
    for _ in range(depth):
        nxt = []
        for cell in cells:
            nxt.extend(cell.bisect())
        cells = nxt
    out = None
    for cell in cells:
        enc = poly_eval(coeffs, cell)
        if cell.width > 0 and math.isfinite(cell.width):
            c = Interval.point(cell.mid)
            mv = poly_eval(coeffs, c) + poly_eval(dcoeffs, cell) * (cell - c)
            enc = Interval(max(enc.lo, mv.lo), min(enc.hi, mv.hi))
        out = enc if out is None else hull_pair(out, enc)
    return out
