"""Energies of discrete weighted measures.

The energy of sum_i w_i delta_{x_i} for a kernel f is the full double sum
sum_{i,j} w_i w_j f(tau(x_i, x_j)), diagonal included.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import betaln

from . import jacobi
from .configurations import WeightedConfiguration, distance_set
from .kernels import Causal, KernelMismatch, KernelSpec, PFrame, Poly, SphericalPFrame, kernel_eval, pframe_mean
from .spaces import Field, SpaceDescriptor, gram, abs_gram, real_gram


class QuadratureError(RuntimeError):
    pass


class ConstraintViolation(ValueError):
    pass


@dataclass
class EnergyReport:
    value: float
    kernel: KernelSpec
    space: SpaceDescriptor
    n_points: int
    distance_census: dict = field(default_factory=dict)
    target: Optional[float] = None
    source: Optional[str] = None

    @property
    def abs_error(self) -> Optional[float]:
        return None if self.target is None else abs(self.value - self.target)

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "kernel": self.kernel.to_json(),
            "space": self.space.to_json(),
            "n_points": self.n_points,
            "distance_census": self.distance_census,
        }
        if self.target is not None:
            out["target"] = self.target
            out["abs_error"] = self.abs_error
            if self.source:
                out["source"] = self.source
        return out


def kernel_matrix(config: WeightedConfiguration, kernel: KernelSpec) -> np.ndarray:
    """Matrix f(tau(x_i, x_j)); validates that kernel and space fit together."""
    space = config.space
    if isinstance(kernel, SphericalPFrame):
        if space.is_projective:
            raise KernelMismatch("|t|^p is a sphere kernel; use PFrame on projective spaces")
        # symmetrization: |Re<x,y>|^p equals the projective p-frame kernel for real spheres
        t = np.clip(real_gram(config.points, space.field), -1.0, 1.0)
        return np.abs(t) ** float(kernel.p)
    if isinstance(kernel, Causal) and space.is_projective:
        raise KernelMismatch("the causal kernel lives on spheres")
    return np.asarray(kernel_eval(kernel, config.tau()), dtype=float)


def energy_value(config: WeightedConfiguration, kernel: KernelSpec) -> float:
    """Compensated double sum (fsum over the weighted kernel matrix)."""
    fmat = kernel_matrix(config, kernel)
    w = config.weights
    terms = (w[:, None] * fmat * w[None, :]).ravel()
    return math.fsum(terms.tolist())


def energy(config: WeightedConfiguration, kernel: KernelSpec, target: Optional[float] = None,
           source: Optional[str] = None, census: bool = True) -> EnergyReport:
    value = energy_value(config, kernel)
    cen = {}
    if census:
        ds = distance_set(config)
        cen = {repr(round(v, 12)): c for v, c in zip(ds.values, ds.counts)}
    return EnergyReport(value, kernel, config.space, config.n_points, cen, target, source)


def uniform_measure_energy(kernel: KernelSpec, space: SpaceDescriptor, degree_cap: int = 40) -> float:
    """Energy of the invariant measure, i.e. the integral of f against dnu.

    Polynomials of degree up to ``degree_cap`` are handled exactly.
    """
    a, b = space.params
    if isinstance(kernel, PFrame):
        # closed form of the zeroth coefficient, cross-checked by adaptive quadrature
        exact = pframe_mean(float(kernel.p), a, b)
        quad = _adaptive_mean(kernel, a, b, 1e-13)
        if abs(quad - exact) > 1e-10:
            raise QuadratureError(f"quadrature {quad!r} disagrees with closed form {exact!r}")
        return exact
    if isinstance(kernel, Poly):
        if len(kernel.coeffs) - 1 > degree_cap:
            raise ValueError("polynomial degree exceeds degree_cap")
        return float(jacobi.expand(list(kernel.coeffs), a, b).coeffs[0])
    coarse = _adaptive_mean(kernel, a, b, 1e-11)
    fine = _adaptive_mean(kernel, a, b, 1e-13)
    if abs(coarse - fine) > 1e-10:
        raise QuadratureError("successive quadrature refinements disagree")
    return fine


def _adaptive_mean(kernel, a, b, tol) -> float:
    af, bf = float(a), float(b)
    func = lambda t: float(kernel_eval(kernel, t))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        num, _ = integrate.quad(func, -1.0, 1.0, weight="alg", wvar=(bf, af), epsabs=tol, epsrel=tol, limit=400)
    # total mass 2^{a+b+1} B(a+1, b+1)
    den = math.exp((af + bf + 1) * math.log(2.0) + betaln(af + 1, bf + 1))
    return num / den


def noncompact_energy(points, weights, p: float, field=Field.R, tol: float = 1e-10) -> dict:
    """p-frame energy of a measure on F^d normalized by its second moment."""
    field = Field.parse(field)
    w = np.asarray(weights, dtype=float)
    if p < 2:
        raise ValueError("the second-moment normalization is used for p >= 2")
    if field is Field.H:
        sq = np.sum(np.asarray(points, dtype=float) ** 2, axis=(-1, -2))
    else:
        sq = np.sum(np.abs(np.asarray(points)) ** 2, axis=-1)
    moment = float(np.dot(w, sq))
    if abs(moment - 1.0) > tol:
        raise ConstraintViolation(f"second moment is {moment!r}, expected 1")
    a = abs_gram(points, field)
    value = math.fsum((w[:, None] * a**p * w[None, :]).ravel().tolist())
    return {"value": value, "second_moment": moment, "constraint_ok": True}
