"""Potential functions in the tau coordinate.

``PFrame(p)`` is f(t) = ((1 + t)/2)^{p/2}, which on a projective space equals
|<x, y>|^p. ``Causal`` is the causal-variational kernel on S^2, ``Poly`` an
arbitrary polynomial and ``JacobiTruncation`` a polynomial given by Jacobi
coefficients minus a multiple of one higher-degree C_{k+1}.

Every kernel evaluates on floats, numpy arrays and ``Interval`` values through
:func:`kernel_eval`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import betaln

from . import jacobi
from .interval import Interval, as_interval, poly_eval
from .spaces import Field

POLYNOMIAL = "polynomial"


class SingularEvaluation(ValueError):
    pass


class KernelMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PFrame:
    p: float

    def __post_init__(self):
        if not float(self.p) > 0:
            raise ValueError("p must be positive")

    @property
    def is_polynomial(self) -> bool:
        return float(self.p) % 2 == 0

    def to_json(self) -> dict:
        return {"type": "pframe", "p": float(self.p)}


@dataclass(frozen=True)
class SphericalPFrame:
    """|t|^p for t the real inner product on a sphere; used via symmetrization."""

    p: float

    def to_json(self) -> dict:
        return {"type": "spherical-pframe", "p": float(self.p)}


@dataclass(frozen=True)
class Causal:
    """max{0, 2 tau^2 (1 + t)(2 - tau^2 (1 - t))}, optionally divided by its value at 1.

    ``tau_sq`` is a sympy-parsable string so interval enclosures stay exact.
    """

    tau_sq: str = "2"
    normalized: bool = False

    @property
    def tau_param(self) -> float:
        return math.sqrt(self._tau_sq_float())

    def _tau_sq_float(self) -> float:
        import sympy

        return float(sympy.sympify(self.tau_sq))

    def to_json(self) -> dict:
        return {"type": "causal", "tau_sq": self.tau_sq, "normalized": self.normalized}


@dataclass(frozen=True)
class Poly:
    """Power-basis coefficients in increasing degree."""

    coeffs: tuple

    def to_json(self) -> dict:
        return {"type": "poly", "coeffs": [str(c) for c in self.coeffs]}


@dataclass(frozen=True)
class JacobiTruncation:
    """g(t) = sum_m coeffs[m] C_m(t) - beta_coeff * C_{k+1}(t)."""

    alpha: Fraction
    beta: Fraction
    coeffs: tuple
    beta_coeff: Fraction
    k: int

    def as_poly(self) -> Poly:
        full = list(self.coeffs) + [Fraction(0)] * max(0, self.k + 2 - len(self.coeffs))
        full[self.k + 1] = full[self.k + 1] - self.beta_coeff
        return Poly(tuple(jacobi.jacobi_to_power(full, self.alpha, self.beta)))

    def to_json(self) -> dict:
        return {
            "type": "jacobi-truncation",
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "coeffs": [str(c) for c in self.coeffs],
            "beta_coeff": str(self.beta_coeff),
            "k": self.k,
        }


KernelSpec = Union[PFrame, SphericalPFrame, Causal, Poly, JacobiTruncation]


def kernel_from_json(obj: dict) -> KernelSpec:
    kind = obj.get("type")
    if kind == "pframe":
        return PFrame(float(obj["p"]))
    if kind == "spherical-pframe":
        return SphericalPFrame(float(obj["p"]))
    if kind == "causal":
        return Causal(str(obj.get("tau_sq", "2")), bool(obj.get("normalized", False)))
    if kind == "poly":
        return Poly(tuple(Fraction(c) for c in obj["coeffs"]))
    if kind == "jacobi-truncation":
        return JacobiTruncation(
            Fraction(obj["alpha"]),
            Fraction(obj["beta"]),
            tuple(Fraction(c) for c in obj["coeffs"]),
            Fraction(obj["beta_coeff"]),
            int(obj["k"]),
        )
    raise ValueError(f"unknown kernel type {kind!r}")


# -- p-frame closed forms ----------------------------------------------------

def falling(x, k: int):
    """Falling factorial x (x - 1) ... (x - k + 1); works for intervals."""
    out = Interval(1.0, 1.0) if isinstance(x, Interval) else 1.0
    for j in range(k):
        out = out * (x - j)
    return out


def pframe_eval(p, t, k: int = 0):
    """k-th derivative of ((1 + t)/2)^{p/2}.

    Closed form 2^{-p/2} (p/2)_k (1 + t)^{p/2 - k} with (x)_k falling.
    ``p`` or ``t`` may be intervals.
    """
    if isinstance(p, Interval) or isinstance(t, Interval):
        p_i = as_interval(p)
        half = p_i * Interval(0.5, 0.5)
        base = as_interval(t) + Interval(1.0, 1.0)
        base = Interval(max(base.lo, 0.0), max(base.hi, 0.0))
        coef = falling(half, k)
        if coef.lo == 0.0 and coef.hi == 0.0:
            return Interval(0.0, 0.0)
        power = base.rpow(half - k)
        scale = Interval(2.0, 2.0).rpow(-half)
        return scale * coef * power
    half = float(p) / 2.0
    t_arr = np.asarray(t, dtype=float)
    coef = falling(half, k)
    expo = half - k
    if coef == 0.0:
        out = np.zeros_like(t_arr)
    else:
        base = np.maximum(1.0 + t_arr, 0.0)
        if expo < 0 and np.any(base == 0.0):
            raise SingularEvaluation(f"derivative of order {k} is singular at t = -1 for p = {p}")
        out = coef * 2.0 ** (-half) * base**expo
    return float(out) if np.ndim(out) == 0 else out


def pframe_dp(p, t):
    """Partial derivative of ((1 + t)/2)^{p/2} with respect to p (interval)."""
    u = (as_interval(t) + Interval(1.0, 1.0)) * Interval(0.5, 0.5)
    if u.lo <= 0:
        raise SingularEvaluation("p-derivative needs t > -1")
    return Interval(0.5, 0.5) * u.log() * u.rpow(as_interval(p) * Interval(0.5, 0.5))


def causal_quadratic(spec: Causal, t):
    """The polynomial inside the max, 2 tau^2 (1 + t)(2 - tau^2 (1 - t)), with normalization."""
    if isinstance(t, Interval):
        s = Interval.from_expr(spec.tau_sq)
        q = Interval(2.0, 2.0) * s * (t + 1) * (Interval(2.0, 2.0) - s * (1 - t))
        if spec.normalized:
            q = q / (Interval(8.0, 8.0) * s)
        return q
    s = spec._tau_sq_float()
    t_arr = np.asarray(t, dtype=float)
    q = 2.0 * s * (1.0 + t_arr) * (2.0 - s * (1.0 - t_arr))
    if spec.normalized:
        q = q / (8.0 * s)
    return q


def causal_power(spec: Causal) -> list:
    """Power coefficients of the quadratic part as exact sympy numbers."""
    import sympy

    s = sympy.sympify(spec.tau_sq)
    t = sympy.Symbol("t")
    q = sympy.expand(2 * s * (1 + t) * (2 - s * (1 - t)))
    if spec.normalized:
        q = sympy.expand(q / (8 * s))
    poly = sympy.Poly(q, t)
    return [sympy.nsimplify(c) for c in reversed(poly.all_coeffs())]


def kernel_eval(spec: KernelSpec, t, k: int = 0):
    """Kernel value (k = 0) or k-th derivative at t; t may be an array or an Interval."""
    if isinstance(spec, PFrame):
        return pframe_eval(spec.p, t, k)
    if isinstance(spec, Causal):
        if k != 0:
            raise ValueError("the causal kernel only supports k = 0")
        q = causal_quadratic(spec, t)
        if isinstance(q, Interval):
            return q.max0()
        out = np.maximum(q, 0.0)
        return float(out) if np.ndim(out) == 0 else out
    if isinstance(spec, JacobiTruncation):
        return kernel_eval(spec.as_poly(), t, k)
    if isinstance(spec, Poly):
        coeffs = list(spec.coeffs)
        for _ in range(k):
            coeffs = [c * j for j, c in enumerate(coeffs)][1:] or [0]
        if isinstance(t, Interval):
            return poly_eval([as_interval(c) for c in coeffs], t)
        out = np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), [float(c) for c in coeffs])
        return float(out) if np.ndim(out) == 0 else out
    if isinstance(spec, SphericalPFrame):
        raise KernelMismatch("|t|^p is only evaluated through projective symmetrization")
    raise TypeError(f"unknown kernel {spec!r}")


def abs_monotonic_degree(spec: PFrame):
    """Degree M of absolute monotonicity with a nonpositive (M+1)-th derivative.

    Returns ``POLYNOMIAL`` for even p, where derivatives eventually vanish.
    """
    if not isinstance(spec, PFrame):
        raise TypeError("absolute monotonicity degree is defined for p-frame kernels")
    p = float(spec.p)
    if p % 2 == 0:
        return POLYNOMIAL
    # derivative k carries the factor (p/2)(p/2 - 1)...(p/2 - k + 1)
    m = 0
    while falling(p / 2, m + 1) >= 0:
        m += 1
    return m


def even_p_minimum(field, d: int, k: int) -> Fraction:
    """Exact minimum c_F(d, k) of the 2k-frame energy on FP^{d-1}."""
    field = Field.parse(field)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if field is Field.R:
        out = Fraction(1)
        for i in range(1, k + 1):
            out *= Fraction(2 * i - 1, d + 2 * i - 2)
        return out
    if field is Field.C:
        return Fraction(1, math.comb(d + k - 1, k))
    if field is Field.H:
        return Fraction(k + 1, math.comb(2 * d + k - 1, k))
    raise ValueError("octonionic spaces are not supported")


def sic_energy(d: int) -> float:
    """p = 3 frame energy of a SIC in C^d."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return (1.0 + (d * d - 1) * (1.0 / (d + 1)) ** 1.5) / (d * d)


def pframe_mean(p, alpha, beta) -> float:
    """Closed form of the n = 0 coefficient B(a+1, b+1+p/2)/B(a+1, b+1)."""
    a, b = float(alpha), float(beta)
    return math.exp(betaln(a + 1, b + 1 + p / 2) - betaln(a + 1, b + 1))


def kernel_expansion(spec: KernelSpec, alpha, beta, degree: int, nquad: int | None = None) -> jacobi.JacobiExpansion:
    """Truncated Jacobi expansion of a kernel.

    The p-frame factor (1 + t)^{p/2} is absorbed into a Gauss-Jacobi rule with
    parameters (alpha, beta + p/2), so the projection is accurate despite the
    endpoint singularity.
    """
    a, b = jacobi._check(alpha, beta)
    if isinstance(spec, Poly):
        exp = jacobi.expand(list(spec.coeffs), a, b)
        coeffs = list(exp.coeffs) + [0] * max(0, degree + 1 - len(exp.coeffs))
        return jacobi.JacobiExpansion(a, b, coeffs)
    if isinstance(spec, JacobiTruncation):
        return kernel_expansion(spec.as_poly(), a, b, degree)
    if isinstance(spec, PFrame):
        p = float(spec.p)
        nquad = nquad or max(degree + 30, 60)
        shifted = b + Fraction(p) / 2
        nodes, weights = jacobi.gauss_jacobi(a, shifted, nquad)
        table = jacobi.jacobi_eval_all(a, b, degree, nodes)
        mean = pframe_mean(p, a, b)
        coeffs = [mean * float(np.dot(weights, table[n])) / float(jacobi.norm_sq(a, b, n)) for n in range(degree + 1)]
        return jacobi.JacobiExpansion(a, b, coeffs)
    return jacobi.project_function(lambda x: kernel_eval(spec, x), a, b, degree, nquad or 400)
