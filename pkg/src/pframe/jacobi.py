"""Jacobi polynomial engine.

Polynomials C_n = C_n^{(alpha, beta)} are orthogonal for the probability measure
``dnu ~ (1 - t)^alpha (1 + t)^beta dt`` on [-1, 1] and normalized by C_n(1) = 1.
Exact work is done with ``fractions.Fraction`` (recurrence coefficients, basis
changes); floating point is used for evaluation at many points and quadrature.

Expansion coefficients are the plain coefficients of f = sum_n c_n C_n. They
differ from harmonic-analysis normalizations only by positive factors, so signs
and the n = 0 term are unaffected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .interval import Interval, as_interval, poly_eval


class InvalidParameters(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


def _check(alpha, beta) -> tuple[Fraction, Fraction]:
    a, b = _frac(alpha), _frac(beta)
    if a <= -1 or b <= -1:
        raise InvalidParameters(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    return a, b


@lru_cache(maxsize=None)
def _recurrence(alpha: Fraction, beta: Fraction, n: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Monic recurrence coefficients a_0..a_{n-1}, b_0..b_{n-1} (b_0 = 1)."""
    s = alpha + beta
    a_list, b_list = [], []
    for k in range(n):
        if k == 0:
            a_list.append((beta - alpha) / (s + 2))
            b_list.append(Fraction(1))
            continue
        a_list.append((beta * beta - alpha * alpha) / ((2 * k + s) * (2 * k + s + 2)))
        if k == 1:
            b_list.append(4 * (1 + alpha) * (1 + beta) / ((2 + s) ** 2 * (3 + s)))
        else:
            num = 4 * k * (k + alpha) * (k + beta) * (k + s)
            den = (2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1)
            b_list.append(num / den)
    return tuple(a_list), tuple(b_list)


def recurrence_coeffs(alpha, beta, n: int):
    """Exact monic three-term recurrence coefficients (a_k, b_k), k < n.

    Q_{k+1}(t) = (t - a_k) Q_k(t) - b_k Q_{k-1}(t).
    """
    a, b = _check(alpha, beta)
    return _recurrence(a, b, n)


@lru_cache(maxsize=None)
def _monic_table(alpha: Fraction, beta: Fraction, n: int) -> tuple[tuple[Fraction, ...], ...]:
    a_k, b_k = _recurrence(alpha, beta, n)
    rows = [(Fraction(1),)]
    prev: list[Fraction] = []
    cur = [Fraction(1)]
    for k in range(n):
        nxt = [Fraction(0)] + cur  # t * Q_k
        for i, c in enumerate(cur):
            nxt[i] -= a_k[k] * c
        if k >= 1:
            for i, c in enumerate(prev):
                nxt[i] -= b_k[k] * c
        prev, cur = cur, nxt
        rows.append(tuple(nxt))
    return tuple(rows)


def jacobi_monic(alpha, beta, n: int) -> list[Fraction]:
    """Power-basis coefficients (increasing degree) of the monic Q_n."""
    a, b = _check(alpha, beta)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return list(_monic_table(a, b, n)[n])


def monic_at_one(alpha, beta, n: int) -> Fraction:
    return sum(jacobi_monic(alpha, beta, n), Fraction(0))


def jacobi_power(alpha, beta, n: int) -> list[Fraction]:
    """Power-basis coefficients of C_n, normalized so that C_n(1) = 1."""
    q = jacobi_monic(alpha, beta, n)
    at1 = sum(q, Fraction(0))
    return [c / at1 for c in q]


def norm_sq(alpha, beta, n: int) -> Fraction:
    """Exact integral of C_n^2 against the probability measure."""
    a, b = _check(alpha, beta)
    _, b_k = _recurrence(a, b, n + 1)
    prod = Fraction(1)
    for k in range(1, n + 1):
        prod *= b_k[k]
    return prod / monic_at_one(a, b, n) ** 2


def jacobi_eval_all(alpha, beta, nmax: int, t) -> np.ndarray:
    """Values C_0(t), ..., C_nmax(t) stacked along axis 0 (float)."""
    a, b = _check(alpha, beta)
    t = np.asarray(t, dtype=float)
    a_k, b_k = _recurrence(a, b, max(nmax, 1))
    out = np.empty((nmax + 1,) + t.shape)
    q_prev = np.zeros_like(t)
    q = np.ones_like(t)
    out[0] = 1.0
    scale = Fraction(1)
    for k in range(nmax):
        q_next = (t - float(a_k[k])) * q - (float(b_k[k]) * q_prev if k >= 1 else 0.0)
        q_prev, q = q, q_next
        scale = monic_at_one(a, b, k + 1)
        out[k + 1] = q / float(scale)
    return out


def jacobi_eval(alpha, beta, n: int, t):
    """C_n(t) by the monic recurrence, rescaled so that C_n(1) = 1."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    vals = jacobi_eval_all(alpha, beta, n, t)[n]
    return float(vals) if np.ndim(vals) == 0 else vals


def jacobi_eval_interval(alpha, beta, n: int, t) -> Interval:
    return poly_eval([Interval.point(c) for c in jacobi_power(alpha, beta, n)], t)


@lru_cache(maxsize=None)
def _power_to_jacobi_matrix(alpha: Fraction, beta: Fraction, deg: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact matrix J with jacobi_coeffs[n] = sum_k J[n][k] * power_coeffs[k]."""
    basis = [jacobi_power(alpha, beta, n) for n in range(deg + 1)]
    cols = []
    for k in range(deg + 1):
        # express t^k in the C basis by back substitution
        rem = [Fraction(0)] * (k + 1)
        rem[k] = Fraction(1)
        c = [Fraction(0)] * (deg + 1)
        for n in range(k, -1, -1):
            if rem[n] == 0:
                continue
            coef = rem[n] / basis[n][n]
            c[n] = coef
            for i, v in enumerate(basis[n]):
                rem[i] -= coef * v
        cols.append(c)
    return tuple(tuple(cols[k][n] for k in range(deg + 1)) for n in range(deg + 1))


def _is_exact(values) -> bool:
    return all(isinstance(v, (Fraction, int, np.integer)) for v in values)


def power_to_jacobi(coeffs: Sequence, alpha, beta) -> list:
    """Change of basis from power coefficients to C_n coefficients.

    Rational input is converted exactly, interval input by an exact rational
    matrix applied in interval arithmetic, float input by quadrature.
    """
    a, b = _check(alpha, beta)
    coeffs = list(coeffs)
    if not coeffs:
        return []
    deg = len(coeffs) - 1
    if _is_exact(coeffs):
        mat = _power_to_jacobi_matrix(a, b, deg)
        vals = [_frac(c) for c in coeffs]
        return [sum((mat[n][k] * vals[k] for k in range(n, deg + 1)), Fraction(0)) for n in range(deg + 1)]
    if any(isinstance(c, Interval) for c in coeffs):
        mat = _power_to_jacobi_matrix(a, b, deg)
        vals = [as_interval(c) for c in coeffs]
        out = []
        for n in range(deg + 1):
            acc = Interval(0.0, 0.0)
            for k in range(n, deg + 1):
                if mat[n][k] != 0:
                    acc = acc + Interval.point(mat[n][k]) * vals[k]
            out.append(acc)
        return out
    coeffs_f = np.asarray(coeffs, dtype=float)
    nodes, weights = gauss_jacobi(a, b, deg + 1)
    fvals = np.polynomial.polynomial.polyval(nodes, coeffs_f)
    table = jacobi_eval_all(a, b, deg, nodes)
    return [float(np.dot(weights, fvals * table[n]) / float(norm_sq(a, b, n))) for n in range(deg + 1)]


def jacobi_to_power(coeffs: Sequence, alpha, beta) -> list:
    """Power coefficients of sum_n coeffs[n] C_n, in the arithmetic of the inputs."""
    a, b = _check(alpha, beta)
    coeffs = list(coeffs)
    if not coeffs:
        return []
    deg = len(coeffs) - 1
    basis = [jacobi_power(a, b, n) for n in range(deg + 1)]
    if _is_exact(coeffs):
        out = [Fraction(0)] * (deg + 1)
        for n, c in enumerate(coeffs):
            for k, v in enumerate(basis[n]):
                out[k] += _frac(c) * v
        return out
    if any(isinstance(c, Interval) for c in coeffs):
        out = [Interval(0.0, 0.0)] * (deg + 1)
        for n, c in enumerate(coeffs):
            ci = as_interval(c)
            for k, v in enumerate(basis[n]):
                if v != 0:
                    out[k] = out[k] + ci * Interval.point(v)
        return out
    out_f = np.zeros(deg + 1)
    for n, c in enumerate(coeffs):
        out_f[: n + 1] += float(c) * np.array([float(v) for v in basis[n]])
    return list(out_f)


@dataclass
class JacobiExpansion:
    """sum_n coeffs[n] * C_n^{(alpha, beta)}(t)."""

    alpha: Fraction
    beta: Fraction
    coeffs: list = field(default_factory=list)

    def __post_init__(self):
        self.alpha, self.beta = _check(self.alpha, self.beta)
        self.coeffs = list(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        if isinstance(t, Interval):
            return poly_eval(jacobi_to_power([as_interval(c) for c in self.coeffs], self.alpha, self.beta), t)
        if not self.coeffs:
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        table = jacobi_eval_all(self.alpha, self.beta, self.degree, t)
        c = np.array([float(as_interval(v).mid) if isinstance(v, Interval) else float(v) for v in self.coeffs])
        vals = np.tensordot(c, table, axes=1)
        return float(vals) if np.ndim(vals) == 0 else vals

    def at_one(self):
        """Value at t = 1, which is the plain coefficient sum."""
        if any(isinstance(c, Interval) for c in self.coeffs):
            acc = Interval(0.0, 0.0)
            for c in self.coeffs:
                acc = acc + as_interval(c)
            return acc
        return sum(self.coeffs, Fraction(0) if _is_exact(self.coeffs) else 0.0)

    def to_power(self) -> list:
        return jacobi_to_power(self.coeffs, self.alpha, self.beta)

    def floats(self) -> np.ndarray:
        return np.array([as_interval(c).mid if isinstance(c, Interval) else float(c) for c in self.coeffs])


def expand(poly: Sequence, alpha, beta) -> JacobiExpansion:
    """Expand a power-basis polynomial (increasing degree) into C_n."""
    poly = list(poly)
    while len(poly) > 1 and not isinstance(poly[-1], Interval) and poly[-1] == 0:
        poly.pop()
    return JacobiExpansion(alpha, beta, power_to_jacobi(poly, alpha, beta))


def project_function(func, alpha, beta, degree: int, nquad: int | None = None) -> JacobiExpansion:
    """Truncated expansion of a smooth function by Gauss-Jacobi projection."""
    a, b = _check(alpha, beta)
    nquad = nquad or max(2 * degree + 20, 40)
    nodes, weights = gauss_jacobi(a, b, nquad)
    fvals = np.asarray(func(nodes), dtype=float)
    table = jacobi_eval_all(a, b, degree, nodes)
    coeffs = [float(np.dot(weights, fvals * table[n]) / float(norm_sq(a, b, n))) for n in range(degree + 1)]
    return JacobiExpansion(a, b, coeffs)


@lru_cache(maxsize=256)
def _gauss_jacobi(alpha: Fraction, beta: Fraction, n: int) -> tuple[np.ndarray, np.ndarray]:
    a_k, b_k = _recurrence(alpha, beta, n)
    diag = np.array([float(x) for x in a_k])
    off = np.sqrt(np.array([float(x) for x in b_k[1:]]))
    if n == 1:
        return np.array([diag[0]]), np.array([1.0])
    try:
        nodes, vecs = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError("Gauss-Jacobi eigenvalue solve did not converge") from exc
    weights = vecs[0, :] ** 2
    weights /= weights.sum()
    return nodes, weights


def gauss_jacobi(alpha, beta, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Golub-Welsch nodes and probability weights for dnu^{(alpha, beta)}."""
    if n < 1:
        raise ValueError("need at least one node")
    a, b = _check(alpha, beta)
    nodes, weights = _gauss_jacobi(a, b, n)
    return nodes.copy(), weights.copy()


class Definiteness(str, enum.Enum):
    YES = "yes"
    NO = "no"
    MARGINAL = "marginal"


def is_positive_definite(expansion, tol: float = 1e-10) -> Definiteness:
    """Sign test on expansion coefficients.

    Interval coefficients count as nonnegative when their lower end is >= 0;
    exact zeros are always acceptable.
    """
    coeffs = expansion.coeffs if isinstance(expansion, JacobiExpansion) else list(expansion)
    verdict = Definiteness.YES
    for c in coeffs:
        if isinstance(c, Interval):
            if c.lo >= 0:
                continue
            if c.hi < 0 or c.hi <= -tol:
                return Definiteness.NO
            verdict = Definiteness.MARGINAL
            continue
        v = c if isinstance(c, Fraction) else float(c)
        if v == 0 or v >= tol or (isinstance(v, Fraction) and v > 0):
            continue
        if v <= -tol:
            return Definiteness.NO
        verdict = Definiteness.MARGINAL
    return verdict
