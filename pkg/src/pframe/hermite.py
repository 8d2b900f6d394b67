"""Confluent divided differences and Hermite interpolation in Newton form.

Nodes are kept as exact sympy strings so that repeated nodes are recognised by
identity rather than by floating comparison. The same divided-difference
routine runs on floats (construction), ``Interval`` values (verification) and
``Fraction`` values (polynomial kernels with rational nodes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import sympy

from .interval import Interval, as_interval, hull_pair, poly_derivative, poly_eval, poly_range
from .kernels import (
    POLYNOMIAL,
    JacobiTruncation,
    PFrame,
    Poly,
    SingularEvaluation,
    abs_monotonic_degree,
    falling,
    kernel_eval,
)


class PreconditionError(ValueError):
    pass


def _canon(value) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        f = Fraction(value)
        return sympy.Rational(f.numerator, f.denominator)
    return sympy.nsimplify(sympy.sympify(value), rational=False)


@dataclass(frozen=True)
class NodeSystem:
    """Nondecreasing nodes s_1 <= ... <= s_D with repeats encoding multiplicity."""

    nodes: tuple

    def __post_init__(self):
        exprs = [_canon(v) for v in self.nodes]
        if not exprs:
            raise ValueError("a node system needs at least one node")
        for e in exprs:
            if not e.is_real:
                raise PreconditionError(f"node {e} is not real")
            if e < -1 or e > 1:
                raise PreconditionError(f"node {e} lies outside [-1, 1]")
        exprs.sort(key=lambda e: float(sympy.N(e, 30)))
        object.__setattr__(self, "nodes", tuple(str(e) for e in exprs))

    @classmethod
    def from_multiplicities(cls, pairs) -> "NodeSystem":
        """Build from (node, multiplicity) pairs or a dict."""
        items = pairs.items() if isinstance(pairs, dict) else pairs
        nodes = []
        for value, k in items:
            if int(k) < 1:
                raise ValueError("multiplicities must be positive")
            nodes.extend([value] * int(k))
        return cls(tuple(nodes))

    @property
    def D(self) -> int:
        return len(self.nodes)

    def exact(self) -> list:
        return [sympy.sympify(s) for s in self.nodes]

    def group_ids(self) -> list[int]:
        ids, gid = [], -1
        for i, s in enumerate(self.nodes):
            if i == 0 or s != self.nodes[i - 1]:
                gid += 1
            ids.append(gid)
        return ids

    def distinct(self) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for s in self.nodes:
            if out and out[-1][0] == s:
                out[-1] = (s, out[-1][1] + 1)
            else:
                out.append((s, 1))
        return out

    def floats(self) -> list[float]:
        return [float(sympy.N(e, 30)) for e in self.exact()]

    def intervals(self) -> list[Interval]:
        return [Interval.from_expr(s) for s in self.nodes]

    def fractions(self) -> Optional[list[Fraction]]:
        exprs = self.exact()
        if not all(e.is_Rational for e in exprs):
            return None
        return [Fraction(int(e.p), int(e.q)) for e in exprs]

    def annihilator_nonpositive(self) -> bool:
        """True when g(t) = prod (t - s_j) is <= 0 on [-1, 1]."""
        one_mult = 0
        for s, k in self.distinct():
            e = sympy.sympify(s)
            if e == 1:
                one_mult = k
            elif e != -1 and k % 2:
                return False
        return one_mult % 2 == 1

    def annihilator(self, mode: str = "float") -> list:
        """Power coefficients of g, increasing degree."""
        return _product_poly(self._values(mode), mode)

    def _values(self, mode: str) -> list:
        if mode == "float":
            return self.floats()
        if mode == "interval":
            return self.intervals()
        if mode == "exact":
            fr = self.fractions()
            if fr is None:
                raise ValueError("exact mode needs rational nodes")
            return fr
        raise ValueError(f"unknown mode {mode!r}")

    def to_json(self) -> list[str]:
        return list(self.nodes)

    @classmethod
    def from_json(cls, obj) -> "NodeSystem":
        return cls(tuple(obj))


# -- kernel derivatives in each arithmetic --------------------------------------

def exact_power_coeffs(kernel) -> Optional[list[Fraction]]:
    """Exact power coefficients when the kernel is a rational polynomial."""
    if isinstance(kernel, JacobiTruncation):
        kernel = kernel.as_poly()
    if isinstance(kernel, Poly):
        try:
            return [Fraction(c) if not isinstance(c, Fraction) else c for c in kernel.coeffs]
        except (TypeError, ValueError):
            return None
    if isinstance(kernel, PFrame) and kernel.is_polynomial:
        n = int(round(float(kernel.p))) // 2
        scale = Fraction(1, 2**n)
        return [scale * math.comb(n, j) for j in range(n + 1)]
    return None


def _poly_derivative_exact(coeffs: list, k: int) -> list:
    for _ in range(k):
        coeffs = [c * j for j, c in enumerate(coeffs)][1:] or [Fraction(0)]
    return coeffs


def _horner(coeffs: Sequence, x):
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative_fn(kernel, mode: str) -> Callable:
    if mode == "exact":
        base = exact_power_coeffs(kernel)
        if base is None:
            raise ValueError("exact mode needs a kernel with rational polynomial coefficients")
        return lambda x, k: _horner(_poly_derivative_exact(base, k), x)
    if mode == "interval":
        return lambda x, k: as_interval(kernel_eval(kernel, as_interval(x), k))
    return lambda x, k: float(kernel_eval(kernel, float(x), k))


def _finite(v) -> bool:
    if isinstance(v, Interval):
        return math.isfinite(v.lo) and math.isfinite(v.hi)
    if isinstance(v, Fraction):
        return True
    return math.isfinite(v)


# -- divided differences and the Newton form ------------------------------------

def divided_difference_table(kernel, nodes: NodeSystem, mode: str = "float") -> list[list]:
    """Full triangle: table[r][i] = f[s_i, ..., s_{i+r}].

    A run of equal nodes of length r + 1 contributes f^{(r)}(s)/r!.
    """
    z = nodes._values(mode)
    ids = nodes.group_ids()
    deriv = _derivative_fn(kernel, mode)
    cache: dict = {}

    def dk(i: int, k: int):
        key = (ids[i], k)
        if key not in cache:
            try:
                val = deriv(z[i], k)
            except (SingularEvaluation, ZeroDivisionError) as exc:
                raise SingularEvaluation(f"derivative {k} of the kernel is singular at node {nodes.nodes[i]}") from exc
            if not _finite(val):
                raise SingularEvaluation(f"derivative {k} of the kernel is singular at node {nodes.nodes[i]}")
            cache[key] = val / math.factorial(k)
        return cache[key]

    n = len(z)
    col = [dk(i, 0) for i in range(n)]
    table = [col]
    for order in range(1, n):
        nxt = []
        for i in range(n - order):
            j = i + order
            if ids[i] == ids[j]:
                nxt.append(dk(i, order))
            else:
                nxt.append((col[i + 1] - col[i]) / (z[j] - z[i]))
        col = nxt
        table.append(col)
    return table


def divided_differences(kernel, nodes: NodeSystem, mode: str = "float") -> list:
    """Newton coefficients Q[f, g_j](s_{j+1}) = f[s_1, ..., s_{j+1}], j = 0..D-1."""
    return [row[0] for row in divided_difference_table(kernel, nodes, mode)]


def _zero(mode: str):
    return {"float": 0.0, "interval": Interval(0.0, 0.0), "exact": Fraction(0)}[mode]


def _times_linear(poly: list, root, mode: str) -> list:
    """poly(t) * (t - root)."""
    out = [_zero(mode)] + list(poly)
    for k, c in enumerate(poly):
        out[k] = out[k] - root * c
    return out


def _product_poly(roots: list, mode: str) -> list:
    poly = [_zero(mode) + 1]
    for r in roots:
        poly = _times_linear(poly, r, mode)
    return poly


def newton_to_power(newton: list, values: list, mode: str) -> list:
    """Expand sum_j newton[j] prod_{i<j} (t - values[i]) into power coefficients."""
    poly = [newton[-1]]
    for j in range(len(newton) - 2, -1, -1):
        poly = _times_linear(poly, values[j], mode)
        poly[0] = poly[0] + newton[j]
    return poly


def hermite_interpolant(kernel, nodes: NodeSystem, mode: str = "float") -> list:
    """Power coefficients (increasing degree) of H[f, g], degree < D."""
    newton = divided_differences(kernel, nodes, mode)
    return newton_to_power(newton, nodes._values(mode), mode)


# -- verifying f >= h ----------------------------------------------------------------

@dataclass
class SweepResult:
    status: str  # "certified", "violated" or "inconclusive"
    cells: int
    bad_cells: list = field(default_factory=list)
    min_lower: float = math.inf

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cells": self.cells,
            "bad_cells": [[c.lo, c.hi] for c in self.bad_cells],
        }


def _poly_derivs(h: list, kmax: int) -> list[list]:
    out = [h]
    for _ in range(kmax):
        out.append(poly_derivative(out[-1]))
    return out


def difference_fn(fk: Callable[[Interval, int], Interval], h: Sequence, kmax: int) -> Callable[[Interval, int], Interval]:
    """Enclosure of the k-th derivative of f - h, where h has interval power coefficients."""
    hd = _poly_derivs([as_interval(c) for c in h], kmax)

    def d(x: Interval, k: int) -> Interval:
        while k >= len(hd):
            hd.append(poly_derivative(hd[-1]))
        hk = poly_range(hd[k], x) if x.width > 0 else poly_eval(hd[k], x)
        return fk(x, k) - hk

    return d


def _combine(a: Optional[Interval], b: Interval) -> Interval:
    if a is None:
        return b
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:  # two rigorous enclosures must overlap
        return Interval(min(a.lo, b.lo), max(a.hi, b.hi))
    return Interval(lo, hi)


_WHOLE = Interval(-math.inf, math.inf)


def _safe(fn, *args) -> Optional[Interval]:
    try:
        out = fn(*args)
    except (ValueError, ZeroDivisionError, ArithmeticError):
        return None
    return out


def _taylor(d, x: Interval, r: Interval, k: int, offset: Interval, values: Optional[list]) -> Optional[Interval]:
    """sum_{j<k} d^(j)(r) off^j/j! + d^(k)(hull(x, r)) off^k/k!, with zero lower terms if values is None."""
    top = _safe(d, hull_pair(x, r), k)
    if top is None:
        return None
    try:
        out = top * offset.ipow(k) / math.factorial(k)
        if values is not None:
            for j, v in enumerate(values):
                out = out + v * offset.ipow(j) / math.factorial(j)
    except (ValueError, ZeroDivisionError):
        return None
    return out


def taylor_sweep(
    funcs: Sequence[Callable[[Interval, int], Interval]],
    contacts: Sequence = (),
    exact_contact: bool = False,
    lo: float = -1.0,
    hi: float = 1.0,
    depth_cap: int = 40,
    min_width: float = 1e-12,
    center_order: int = 4,
) -> SweepResult:
    """Adaptive interval proof that max_i F_i(t) >= 0 on [lo, hi].

    Each ``funcs[i](X, k)`` encloses the k-th derivative of F_i over X.
    ``contacts`` lists (point, order) pairs where some F_i is expected to be
    small; cells are enclosed by the naive form intersected with Taylor forms
    about these points, and a cell holding a contact point is split there so
    that different F_i may certify the two sides. With ``exact_contact`` the
    Taylor terms below the contact order are taken to be exactly zero.
    Every cell is also enclosed by a Taylor form of order ``center_order``
    about its midpoint, which removes most of the dependency overestimation.
    """
    contacts = [(as_interval(r), int(k)) for r, k in contacts]
    values: dict = {}
    if not exact_contact:
        for i, fn in enumerate(funcs):
            for c, (r, k) in enumerate(contacts):
                vals = [_safe(fn, r, j) for j in range(k)]
                values[(i, c)] = None if any(v is None for v in vals) else vals

    def taylor_ok(i: int, c: int) -> bool:
        return exact_contact or values.get((i, c)) is not None

    def piece_lower(x: Interval, split: Optional[int], side: int) -> float:
        best_lo = -math.inf
        for i, fn in enumerate(funcs):
            enc = _safe(fn, x, 0)
            if center_order > 0 and x.width > 0:
                m = Interval.point(x.mid)
                vals = [_safe(fn, m, j) for j in range(center_order)]
                if all(v is not None for v in vals):
                    t = _taylor(fn, x, m, center_order, x - m, vals)
                    if t is not None:
                        enc = t if enc is None else _combine(enc, t)
            for c, (r, k) in enumerate(contacts):
                if not taylor_ok(i, c):
                    continue
                if c == split:
                    off = Interval(min(x.lo - r.hi, 0.0), 0.0) if side < 0 else Interval(0.0, max(x.hi - r.lo, 0.0))
                else:
                    off = x - r
                t = _taylor(fn, x, r, k, off, None if exact_contact else values[(i, c)])
                if t is not None:
                    enc = t if enc is None else _combine(enc, t)
            if enc is not None:
                best_lo = max(best_lo, enc.lo)
        return best_lo

    def upper(x: Interval) -> float:
        # an upper bound below zero for every F_i proves a violation
        his = []
        for fn in funcs:
            enc = _safe(fn, x, 0)
            his.append(math.inf if enc is None else enc.hi)
        return max(his)

    def judge(x: Interval) -> float:
        inside = [c for c, (r, _) in enumerate(contacts) if r.hi >= x.lo and r.lo <= x.hi]
        if len(inside) == 1:
            return min(piece_lower(x, inside[0], -1), piece_lower(x, inside[0], 1))
        return piece_lower(x, None, 0)

    stack = [(Interval(lo, hi), 0)]
    cells = 0
    bad: list = []
    status = "certified"
    min_lower = math.inf
    while stack:
        x, depth = stack.pop()
        cells += 1
        low = judge(x)
        if low >= 0:
            min_lower = min(min_lower, low)
            continue
        if upper(x) < 0:
            return SweepResult("violated", cells, [x], low)
        if depth >= depth_cap or x.width < min_width:
            bad.append(x)
            status = "inconclusive"
            continue
        a, b = x.bisect()
        stack.append((b, depth + 1))
        stack.append((a, depth + 1))
    return SweepResult(status, cells, bad, min_lower)


def sweep_nonneg(
    fk: Callable[[Interval, int], Interval],
    h: Sequence,
    touches: Sequence = (),
    exact_contact: bool = True,
    lo: float = -1.0,
    hi: float = 1.0,
    depth_cap: int = 40,
    min_width: float = 1e-12,
    center_order: int = 4,
) -> SweepResult:
    """Adaptive interval proof that f(t) - h(t) >= 0 on [lo, hi].

    ``fk(X, k)`` encloses the k-th derivative of f over X and ``h`` holds
    interval power coefficients. ``touches`` lists (node, order k) where
    f - h vanishes (``exact_contact``) or nearly vanishes to order k.
    """
    kmax = max([int(k) for _, k in touches], default=0)
    d = difference_fn(fk, h, kmax)
    return taylor_sweep([d], touches, exact_contact, lo, hi, depth_cap, min_width)


@dataclass
class RemainderVerdict:
    verdict: str  # "yes", "no" or "inconclusive"
    analytic: str  # "yes", "no" or "not_applicable"
    sweep: SweepResult
    reason: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "analytic": self.analytic, "sweep": self.sweep.to_json(), "reason": self.reason}


def analytic_remainder_sign(kernel, nodes: NodeSystem) -> tuple[str, str]:
    """Sign argument: f - H = g * f^{(D)}(xi)/D! with g <= 0 and f^{(D)} <= 0."""
    if not isinstance(kernel, PFrame):
        return "not_applicable", "no closed-form derivative sign for this kernel"
    D = nodes.D
    sign = falling(float(kernel.p) / 2, D)
    M = abs_monotonic_degree(kernel)
    if sign > 0:
        return "no", f"f^({D}) > 0 so f - H has the sign of g"
    note = "polynomial kernel" if M == POLYNOMIAL else f"absolutely monotonic of degree {M}"
    return "yes", f"{note}; f^({D}) <= 0 and g <= 0"


def _kernel_fk(kernel) -> Callable[[Interval, int], Interval]:
    return lambda x, k: as_interval(kernel_eval(kernel, x, k))


def remainder_nonneg(kernel, nodes: NodeSystem, H: Optional[Sequence] = None, depth_cap: int = 40,
                     min_width: float = 1e-12) -> RemainderVerdict:
    """Check f >= H[f, g] on [-1, 1] by the sign argument and an interval sweep.

    ``H`` defaults to the interval-arithmetic interpolant. The sweep assumes
    ``H`` interpolates f exactly at the nodes, so pass an enclosure of the true
    interpolant (for instance ``hermite_interpolant(..., mode="interval")``).
    """
    if not nodes.annihilator_nonpositive():
        raise PreconditionError("the annihilator g must be <= 0 on [-1, 1]")
    analytic, reason = analytic_remainder_sign(kernel, nodes)
    exact = exact_power_coeffs(kernel)
    fr = nodes.fractions()
    if exact is not None and fr is not None and H is None:
        # polynomial kernel, rational nodes: f - H = g q exactly; sweep q instead
        Hx = hermite_interpolant(kernel, nodes, "exact")
        r = [a - b for a, b in zip(exact + [Fraction(0)] * len(Hx), Hx + [Fraction(0)] * len(exact))]
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        if all(c == 0 for c in r):
            sweep = SweepResult("certified", 0)
        else:
            q = _poly_divide_exact(r, nodes.annihilator("exact"))
            # g <= 0, so f - H >= 0 iff q <= 0
            sweep = sweep_nonneg(lambda x, k: Interval(0.0, 0.0), [Interval.point(c) for c in q],
                                 depth_cap=depth_cap, min_width=min_width)
    else:
        if H is None:
            H = hermite_interpolant(kernel, nodes, "interval")
        touches = [(Interval.from_expr(s), k) for s, k in nodes.distinct()]
        sweep = sweep_nonneg(_kernel_fk(kernel), H, touches, True, depth_cap=depth_cap, min_width=min_width)
    verdict = {"certified": "yes", "violated": "no"}.get(sweep.status, "inconclusive")
    return RemainderVerdict(verdict, analytic, sweep, reason)


def _poly_divide_exact(num: list, den: list) -> list:
    """Exact quotient of power-basis polynomials; the remainder must vanish."""
    num = list(num)
    dq = len(num) - len(den)
    if dq < 0:
        raise ValueError("numerator degree below the divisor degree")
    q = [Fraction(0)] * (dq + 1)
    for k in range(dq, -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        q[k] = c
        for j, dj in enumerate(den):
            num[k + j] -= c * dj
    if any(c != 0 for c in num):
        raise ArithmeticError("f - H is not divisible by g")
    return q
