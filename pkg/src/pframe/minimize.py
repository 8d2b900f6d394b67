"""Energy minimization over weighted point measures.

Points live on the unit sphere of F^d (ambient coordinates, retracted by
normalization) and weights on the probability simplex. Each iteration takes
one Armijo-backtracked step in the points and one projected step in the
weights, so the energy trace never increases.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .configurations import (
    CATALOG,
    WeightedConfiguration,
    catalog_get,
    design_strength,
    distance_set,
    optimal_orbit_weights,
)
from .energy import energy_value
from .kernels import Causal, KernelSpec, PFrame, causal_quadratic, kernel_eval
from .spaces import Field, SpaceDescriptor, gram, qmul, random_points, tau_matrix, unit_vector

ARMIJO_C = 1e-4


@dataclass
class MinimizeOptions:
    max_iter: int = 20000
    grad_tol: float = 1e-8
    point_step: float = 0.1
    weight_step: float = 1.0
    min_step: float = 1e-16
    update_weights: bool = True


@dataclass
class ParticleState:
    config: WeightedConfiguration
    point_step: float
    weight_step: float
    trace: list
    seed: Optional[int]
    iterations: int = 0
    point_residual: float = math.inf
    weight_residual: float = math.inf
    converged: bool = False
    status: str = "max_iter"  # "converged", "stalled" (line search exhausted) or "max_iter"
    warnings: list = field(default_factory=list)

    @property
    def energy(self) -> float:
        return self.trace[-1]

    def to_json(self) -> dict:
        from .configurations import config_to_json

        return {
            "config": config_to_json(self.config),
            "energy": self.energy,
            "iterations": self.iterations,
            "point_residual": self.point_residual,
            "weight_residual": self.weight_residual,
            "converged": self.converged,
            "status": self.status,
            "seed": self.seed,
            "warnings": list(self.warnings),
        }


# -- energy and gradients -------------------------------------------------------------------

def _kernel_values(kernel: KernelSpec, T: np.ndarray) -> np.ndarray:
    return np.asarray(kernel_eval(kernel, T), dtype=float)


def _kernel_slope(kernel: KernelSpec, T: np.ndarray) -> np.ndarray:
    if isinstance(kernel, Causal):
        # subgradient: derivative of the quadratic where it is positive
        q = causal_quadratic(kernel, T)
        s = float(kernel._tau_sq_float())
        dq = 2.0 * s * ((2.0 - s * (1.0 - T)) + s * (1.0 + T))
        if kernel.normalized:
            dq = dq / (8.0 * s)
        return np.where(q > 0, dq, 0.0)
    if isinstance(kernel, PFrame):
        # keep the slope finite at t = -1 when p < 2
        return np.asarray(kernel_eval(kernel, np.maximum(T, -1.0 + 1e-15), 1), dtype=float)
    return np.asarray(kernel_eval(kernel, T, 1), dtype=float)


def energy_and_matrix(points, weights, space: SpaceDescriptor, kernel: KernelSpec):
    T = tau_matrix(points, space)
    F = _kernel_values(kernel, T)
    return float(weights @ F @ weights), T, F


def point_direction(points, weights, space: SpaceDescriptor, kernel: KernelSpec, T: np.ndarray) -> np.ndarray:
    """Riemannian gradient of the energy in x_a divided by w_a (a diagonal preconditioner)."""
    S = _kernel_slope(kernel, T) * weights[None, :]
    G = gram(points, space.field)
    fld = space.field
    if space.is_projective:
        # d|G_ab|^2 / dx_a = 2 x_b G_ab, and dtau = 2 d|G|^2, with two symmetric terms
        if fld is Field.H:
            prod = qmul(points[None, :, :, :], np.broadcast_to(G[:, :, None, :], (len(points),) + points.shape))
            g = 8.0 * np.einsum("ab,abik->aik", S, prod)
        else:
            g = 8.0 * (S * G) @ points
    else:
        g = 2.0 * S @ points
    return _tangent(g, points, fld)


def _tangent(g: np.ndarray, x: np.ndarray, fld: Field) -> np.ndarray:
    if fld is Field.H:
        radial = np.sum(g * x, axis=(-1, -2))
        return g - radial[:, None, None] * x
    radial = np.real(np.sum(g * np.conj(x), axis=-1))
    return g - radial[:, None] * x


def _sqnorm_rows(g: np.ndarray, fld: Field) -> np.ndarray:
    if fld is Field.H:
        return np.sum(g**2, axis=(-1, -2))
    return np.sum(np.abs(g) ** 2, axis=-1)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u * k > css - 1.0)[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1)
    w = np.maximum(v - theta, 0.0)
    return w / w.sum()


# -- descent ---------------------------------------------------------------------------------------

def minimize_energy(space: SpaceDescriptor, kernel: KernelSpec, N: int, seed: Optional[int] = 0,
                    opts: Optional[MinimizeOptions] = None, init: Optional[WeightedConfiguration] = None) -> ParticleState:
    """Projected gradient descent from a random (or given) start."""
    if N < 1:
        raise ValueError("N must be at least 1")
    opts = opts or MinimizeOptions()
    rng = np.random.default_rng(seed)
    if init is not None:
        X, w = init.points.copy(), init.weights.copy()
    else:
        X = random_points(space, N, rng)
        w = rng.dirichlet(np.ones(N)) if opts.update_weights else np.full(N, 1.0 / N)
    notes = []
    if isinstance(kernel, Causal):
        notes.append("causal kernel has a kink; using subgradients")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    E, T, F = energy_and_matrix(X, w, space, kernel)
    trace = [E]
    s, t = opts.point_step, opts.weight_step
    fld = space.field
    it = 0
    pres = wres = math.inf
    converged = False
    status = "max_iter"
    for it in range(1, opts.max_iter + 1):
        # points
        P = point_direction(X, w, space, kernel, T)
        rows = _sqnorm_rows(P, fld)
        pres = math.sqrt(float(np.sum(w * w * rows)))  # norm of the true Riemannian gradient
        slope = float(np.sum(w * rows))
        s = min(s * 2.0, 1.0)
        while s > opts.min_step:
            Xn = unit_vector(X - s * P, fld)
            En, Tn, Fn = energy_and_matrix(Xn, w, space, kernel)
            if En <= E - ARMIJO_C * s * slope:
                X, E, T, F = Xn, En, Tn, Fn
                break
            s *= 0.5
        # weights
        gw = 2.0 * F @ w
        wres = float(np.linalg.norm(w - project_simplex(w - gw)))
        if opts.update_weights:
            t = min(t * 2.0, 1e3)
            while t > opts.min_step:
                wn = project_simplex(w - t * gw)
                En = float(wn @ F @ wn)
                if En <= E + ARMIJO_C * float(gw @ (wn - w)):
                    w, E = wn, En
                    break
                t *= 0.5
        else:
            wres = 0.0
        trace.append(E)
        if pres <= opts.grad_tol and wres <= opts.grad_tol:
            converged, status = True, "converged"
            break
        if s <= opts.min_step and (t <= opts.min_step or not opts.update_weights):
            status = "stalled"
            break
    cfg = WeightedConfiguration(space, X, w, name="minimized")
    return ParticleState(cfg, s, t, trace, seed, it, pres, wres, converged, status, notes)


def multistart(space: SpaceDescriptor, kernel: KernelSpec, N: int, starts: int, seed: int = 0,
               opts: Optional[MinimizeOptions] = None, threads: int = 1) -> list[ParticleState]:
    """Independent runs with spawned seeds; results do not depend on the thread count."""
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(starts)]
    if threads <= 1:
        return [minimize_energy(space, kernel, N, sd, opts) for sd in seeds]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda sd: minimize_energy(space, kernel, N, sd, opts), seeds))


# -- support read-off -----------------------------------------------------------------------------

def _overlap(x, y, space: SpaceDescriptor) -> float:
    """|<x, y>| on projective spaces, <x, y> on spheres."""
    T = tau_matrix(np.stack([x, y]), space)[0, 1]
    return math.sqrt(max((T + 1.0) / 2.0, 0.0)) if space.is_projective else T


def canonicalize_support(state, merge_tol: float = 1e-4, weight_floor: float = 1e-8) -> WeightedConfiguration:
    """Merge nearly equal points (summing weights), drop tiny weights, renormalize."""
    cfg = state.config if isinstance(state, ParticleState) else state
    space = cfg.space
    order = np.argsort(-cfg.weights, kind="stable")
    keep = [i for i in order if cfg.weights[i] >= weight_floor]
    T = tau_matrix(cfg.points, space)
    reps: list[int] = []
    mass: list[float] = []
    for i in keep:
        for r, j in enumerate(reps):
            # sine of the angle between the lines (or points) below merge_tol
            if math.sqrt(max(0.0, (1.0 - T[i, j]) / 2.0)) <= merge_tol:
                mass[r] += float(cfg.weights[i])
                break
        else:
            reps.append(i)
            mass.append(float(cfg.weights[i]))
    w = np.array(mass)
    return WeightedConfiguration(space, cfg.points[reps].copy(), w / w.sum(), name="canonical")


@dataclass
class CatalogComparison:
    match: Optional[str]
    nearest: Optional[str]
    energy: float
    catalog_energy: float
    gap: float
    census_match: bool
    strength: int
    catalog_strength: Optional[int]

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _census(cfg: WeightedConfiguration, decimals: int = 4) -> tuple:
    ds = distance_set(cfg, tol=1e-5)
    return tuple(sorted(round(v, decimals) for v in ds.values))


def compare_to_catalog(config: WeightedConfiguration, kernel: KernelSpec, rel_tol: float = 1e-6) -> CatalogComparison:
    """Nearest catalog configuration by energy, with a census and strength comparison."""
    energy = energy_value(config, kernel)
    strength = design_strength(config, max_t=8, tol=1e-6).strength
    best = None
    for name, entry in CATALOG.items():
        if not entry.constructible:
            continue
        cfg = catalog_get(name)
        if cfg.space != config.space:
            continue
        ce = min(energy_value(cfg, kernel), energy_value(optimal_orbit_weights(cfg, kernel), kernel))
        census = cfg.n_points == config.n_points and _census(cfg) == _census(config)
        gap = (energy - ce) / abs(ce) if ce else energy - ce
        key = (not census, abs(gap))
        if best is None or key < best[0]:
            best = (key, name, ce, census, gap, entry.strength)
    if best is None:
        return CatalogComparison(None, None, energy, math.nan, math.nan, False, strength, None)
    _, name, ce, census, gap, cstr = best
    matched = name if census and abs(gap) <= rel_tol else None
    return CatalogComparison(matched, name, energy, ce, gap, census, strength, cstr)


# -- p-sweep toward an even integer ------------------------------------------------------------------

def p_sweep(space: SpaceDescriptor, q: float, N: int, seed: int = 0, ks=(1, 2, 3, 4), starts: int = 4,
            opts: Optional[MinimizeOptions] = None) -> list[dict]:
    """Minimize at p = q - 10^-k and record how the support drifts."""
    rows = []
    prev = None
    for k in ks:
        p = q - 10.0 ** (-k)
        runs = multistart(space, PFrame(p), N, starts, seed + k, opts)
        best = min(runs, key=lambda r: r.energy)
        can = canonicalize_support(best)
        row = {"p": p, "energy": best.energy, "support": can.n_points, "census": list(_census(can))}
        if prev is not None:
            row["support_change"] = can.n_points - prev.n_points
        rows.append(row)
        prev = can
    return rows
