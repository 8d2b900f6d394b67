"""Optimality certificates and their interval-arithmetic verification.

A certificate holds an auxiliary polynomial h with Jacobi coefficients
enclosed by intervals. For a lower-bound certificate, h <= f on [-1, 1] and
h positive definite imply I_f(mu) >= h_0 for every probability measure mu;
when h also matches f on the distance set of a configuration whose moments
vanish where h has weight, that configuration attains the bound.

Construction may use floating point, but a verdict only ever comes from
:func:`verify_certificate`, which recomputes everything with intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
import sympy

from . import jacobi
from .configurations import (
    CATALOG,
    WeightedConfiguration,
    catalog_get,
    design_moments,
    design_strength,
    distance_set,
    expected_tau,
    tightness_check,
)
from .energy import energy_value
from .hermite import (
    NodeSystem,
    PreconditionError,
    SweepResult,
    exact_power_coeffs,
    hermite_interpolant,
    taylor_sweep,
)
from .interval import Interval, as_interval, poly_derivative, poly_eval, poly_range
from .kernels import (
    Causal,
    KernelSpec,
    PFrame,
    Poly,
    causal_power,
    falling,
    kernel_eval,
    kernel_from_json,
    pframe_dp,
    pframe_eval,
)
from .spaces import Field, Kind, SpaceDescriptor

DELTA = 1e-13  # downward shift of h_0 that makes f - h strictly positive at contacts
MATCH_TOL = 1e-9
ENERGY_TOL = 1e-10
MOMENT_TOL = 1e-10

PASS, FAIL, INCONCLUSIVE, NA = "pass", "fail", "inconclusive", "n/a"


class VerificationError(RuntimeError):
    pass


@dataclass
class Certificate:
    """Auxiliary polynomial h plus everything needed to re-verify it."""

    space: SpaceDescriptor
    kernel: KernelSpec
    h_jacobi: list  # Interval per C_n; exact zeros stay [0, 0]
    h_power: list
    bound: Interval
    nodes: Optional[NodeSystem] = None
    contacts: list = field(default_factory=list)  # (exact string, order)
    config_name: Optional[str] = None
    sense: str = "lower"  # "lower": I_f >= bound; "upper": constrained max <= bound
    constrained_degree: Optional[int] = None
    sweep_points: list = field(default_factory=list)  # extra Taylor centers (exact string, order)
    checks: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)
    verdict: str = "unverified"

    @property
    def claimed_bound(self) -> float:
        return self.bound.lo if self.sense == "lower" else self.bound.hi

    @property
    def degree(self) -> int:
        deg = 0
        for n, c in enumerate(self.h_jacobi):
            if not (c.lo == 0.0 and c.hi == 0.0):
                deg = n
        return deg

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "kernel": self.kernel.to_json(),
            "nodes": self.nodes.to_json() if self.nodes is not None else None,
            "contacts": [[str(s), int(k)] for s, k in self.contacts],
            "h_power": [c.to_json() for c in self.h_power],
            "h_jacobi": [c.to_json() for c in self.h_jacobi],
            "bound": self.bound.to_json(),
            "config": self.config_name,
            "sense": self.sense,
            "constrained_degree": self.constrained_degree,
            "sweep_points": [[str(s), int(k)] for s, k in self.sweep_points],
            "checks": dict(self.checks),
            "evidence": _jsonable(self.evidence),
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(
            space=SpaceDescriptor.from_json(obj["space"]),
            kernel=kernel_from_json(obj["kernel"]),
            h_jacobi=[Interval.from_json(c) for c in obj["h_jacobi"]],
            h_power=[Interval.from_json(c) for c in obj["h_power"]],
            bound=Interval.from_json(obj["bound"]),
            nodes=NodeSystem.from_json(obj["nodes"]) if obj.get("nodes") else None,
            contacts=[(str(s), int(k)) for s, k in obj.get("contacts", [])],
            config_name=obj.get("config"),
            sense=obj.get("sense", "lower"),
            constrained_degree=obj.get("constrained_degree"),
            sweep_points=[(str(s), int(k)) for s, k in obj.get("sweep_points", [])],
            checks=dict(obj.get("checks", {})),
            evidence=dict(obj.get("evidence", {})),
            verdict=obj.get("verdict", "unverified"),
        )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Interval):
        return obj.to_json()
    if isinstance(obj, SweepResult):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def make_certificate(space, kernel, h_jacobi, **kwargs) -> Certificate:
    """Wrap Jacobi coefficients into a certificate; exact values become tight intervals."""
    coeffs = [as_interval(c) for c in h_jacobi]
    power = jacobi.jacobi_to_power(coeffs, space.alpha, space.beta)
    return Certificate(space, kernel, coeffs, power, coeffs[0], **kwargs)


def _shift(coeffs: list, delta: float) -> list:
    out = [as_interval(c) for c in coeffs]
    out[0] = out[0] - Interval.point(delta)
    return out


# -- enclosures of f - h -----------------------------------------------------------

def _poly_diff_fn(poly: list):
    derivs = [poly]
    for _ in range(12):
        derivs.append(poly_derivative(derivs[-1]))

    def d(x: Interval, k: int) -> Interval:
        while k >= len(derivs):
            derivs.append(poly_derivative(derivs[-1]))
        return poly_range(derivs[k], x) if x.width > 0 else poly_eval(derivs[k], x)

    return d


def _sub_poly(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Interval(0.0, 0.0)] * (n - len(a))
    b = list(b) + [Interval(0.0, 0.0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _exact_interval_poly(coeffs) -> list:
    out = []
    for c in coeffs:
        if isinstance(c, Fraction):
            out.append(Interval.point(c))
        else:
            out.append(Interval.from_expr(c))
    return out


def _difference_funcs(kernel, h_power: list, sense: str) -> list:
    """Callables enclosing derivatives of functions whose max equals f - h (or h - f)."""
    sign = 1 if sense == "lower" else -1
    exact = exact_power_coeffs(kernel)
    if exact is not None:
        r = _sub_poly([Interval.point(c) for c in exact], h_power)
        return [_poly_diff_fn(r if sign > 0 else [-c for c in r])]
    if isinstance(kernel, Causal):
        if sign < 0:
            raise VerificationError("upper certificates are not defined for the causal kernel")
        q = _exact_interval_poly(causal_power(kernel))
        # max(q, 0) - h = max(q - h, -h)
        return [_poly_diff_fn(_sub_poly(q, h_power)), _poly_diff_fn([-c for c in h_power])]
    if isinstance(kernel, PFrame):
        hd = _poly_diff_fn(h_power)

        def d(x: Interval, k: int) -> Interval:
            val = as_interval(kernel_eval(kernel, x, k)) - hd(x, k)
            return val if sign > 0 else -val

        return [d]
    raise VerificationError(f"no interval enclosure available for kernel {kernel!r}")


# -- verification ----------------------------------------------------------------------

def _resolve_config(cert: Certificate, config: Optional[WeightedConfiguration]):
    if config is not None:
        return config
    if cert.config_name:
        try:
            return catalog_get(cert.config_name)
        except KeyError:
            return None
    return None


def _check_interpolation(cert: Certificate) -> tuple[str, dict]:
    if not cert.contacts:
        return NA, {}
    hd = [cert.h_power]
    worst = 0.0
    detail = {}
    for s, k in cert.contacts:
        x = Interval.from_expr(s)
        orders = 1 if isinstance(cert.kernel, Causal) else k
        for j in range(orders):
            while j >= len(hd):
                hd.append(poly_derivative(hd[-1]))
            try:
                fv = as_interval(kernel_eval(cert.kernel, x, j))
            except (ValueError, ZeroDivisionError):
                return INCONCLUSIVE, {"node": s, "order": j}
            gap = (fv - poly_eval(hd[j], x)).mag
            worst = max(worst, gap)
            detail[f"{s}:{j}"] = gap
    return (PASS if worst <= MATCH_TOL else FAIL), {"max_mismatch": worst}


def _check_design(cert: Certificate, config: Optional[WeightedConfiguration]) -> tuple[str, dict]:
    if config is None:
        return NA, {}
    if config.space != cert.space:
        return FAIL, {"reason": "configuration lives on a different space"}
    deg = cert.degree
    top = cert.constrained_degree if cert.sense == "upper" else deg
    needed = [n for n in range(1, top + 1)
              if not (cert.h_jacobi[n].lo == 0.0 and cert.h_jacobi[n].hi == 0.0)] if cert.sense == "lower" \
        else list(range(1, top + 1))
    mom = design_moments(config, max(deg, top, 1))
    worst = max([abs(float(mom[n])) for n in needed], default=0.0)
    strength = design_strength(config, max_t=max(deg, top, 1)).strength
    value = energy_value(config, cert.kernel)
    gap = abs(value - cert.bound.mid)
    ev = {"strength": strength, "required_moments": needed, "max_moment": worst, "energy": value,
          "energy_gap": gap}
    ok = worst <= MOMENT_TOL and gap <= ENERGY_TOL
    return (PASS if ok else FAIL), ev


def verify_certificate(cert: Certificate, config: Optional[WeightedConfiguration] = None,
                       depth_cap: int = 40) -> Certificate:
    """Re-run all checks from the stored coefficients; returns an updated copy."""
    checks: dict = {}
    evidence: dict = dict(cert.evidence)
    a, b = cert.space.alpha, cert.space.beta
    # the Jacobi coefficients are canonical; the power form is recomputed from them
    power = jacobi.jacobi_to_power(cert.h_jacobi, a, b)
    consistent = len(power) == len(cert.h_power) and all(
        max(p.lo, q.lo) <= min(p.hi, q.hi) for p, q in zip(power, cert.h_power))
    bound_ok = max(cert.bound.lo, cert.h_jacobi[0].lo) <= min(cert.bound.hi, cert.h_jacobi[0].hi)
    evidence["representation_consistent"] = bool(consistent and bound_ok)

    # 1. h <= f (or h >= f for upper certificates)
    if not (consistent and bound_ok):
        checks["h_leq_f"] = FAIL
    else:
        try:
            funcs = _difference_funcs(cert.kernel, power, cert.sense)
            contacts = [(Interval.from_expr(s), k) for s, k in list(cert.contacts) + list(cert.sweep_points)]
            sweep = taylor_sweep(funcs, contacts, exact_contact=False, depth_cap=depth_cap)
            checks["h_leq_f"] = {"certified": PASS, "violated": FAIL}.get(sweep.status, INCONCLUSIVE)
            evidence["sweep"] = sweep
        except VerificationError as exc:
            checks["h_leq_f"] = INCONCLUSIVE
            evidence["sweep_error"] = str(exc)

    # 2. positive definiteness (lower) or degree within the moment constraints (upper)
    if cert.sense == "lower":
        pd = jacobi.is_positive_definite(cert.h_jacobi)
        checks["positive_definite"] = {jacobi.Definiteness.YES: PASS, jacobi.Definiteness.NO: FAIL}.get(
            pd, INCONCLUSIVE)
        neg = [n for n, c in enumerate(cert.h_jacobi) if c.lo < 0]
        evidence["negative_coefficients"] = neg
    else:
        checks["positive_definite"] = NA
        k = cert.constrained_degree
        checks["degree_within_constraints"] = PASS if k is not None and cert.degree <= k else FAIL

    # 3. agreement with f at the contact points
    checks["interpolation_match"], evidence["interpolation"] = _check_interpolation(cert)

    # 4. moments of the attached configuration vanish wherever h has weight
    cfg = _resolve_config(cert, config)
    checks["design_strength_sufficient"], evidence["design"] = _check_design(cert, cfg)

    states = set(checks.values())
    if FAIL in states:
        verdict = "falsified"
    elif INCONCLUSIVE in states:
        verdict = "inconclusive"
    else:
        verdict = "verified"
    return replace(cert, checks=checks, evidence=evidence, verdict=verdict)


# -- tight designs ---------------------------------------------------------------------

def exact_distances(config: WeightedConfiguration) -> list:
    """Exact tau values (sympy) of a configuration, including 1."""
    ds = distance_set(config)
    pool = expected_tau(config.name) if config.name in CATALOG else None
    out = []
    for v in ds.values:
        hit = None
        if pool is not None:
            cands = [e for e in pool if abs(float(e) - v) <= 1e-7]
            hit = cands[0] if len(cands) == 1 else None
        if hit is None:
            hit = sympy.nsimplify(v, [sympy.sqrt(2), sympy.sqrt(3), sympy.sqrt(5)], tolerance=1e-10)
            if abs(float(hit) - v) > 1e-9:
                raise PreconditionError(f"could not identify the distance {v!r} exactly")
        out.append(sympy.nsimplify(hit))
    return sorted(set(out), key=float)


def tight_node_system(config: WeightedConfiguration) -> tuple[NodeSystem, int]:
    """Interpolation nodes for a tight design: (t-1) g_m^2 or w^2 (t^2 - 1)."""
    tight = tightness_check(config)
    if tight.status != "tight":
        raise PreconditionError(f"configuration {config.name!r} is not a tight design ({tight})")
    taus = exact_distances(config)
    interior = [t for t in taus if t != 1 and t != -1]
    pairs = [(str(t), 2) for t in interior] + [("1", 1)]
    if tight.strength % 2 == 1:
        pairs.append(("-1", 1))
    elif any(t == -1 for t in taus):
        pairs.append(("-1", 2))
    nodes = NodeSystem.from_multiplicities(pairs)
    if nodes.D != tight.strength + 1:
        raise PreconditionError("distance set does not match the tight design structure")
    return nodes, tight.strength


def _monotonic_enough(kernel: PFrame, M: int) -> bool:
    half = float(kernel.p) / 2
    return all(falling(half, k) >= 0 for k in range(M + 1)) and falling(half, M + 1) <= 0


def build_tight_certificate(config: WeightedConfiguration, kernel: KernelSpec, delta: float = DELTA,
                            verify: bool = True) -> Certificate:
    """Hermite certificate that a tight M-design minimizes I_f."""
    if not isinstance(kernel, PFrame):
        raise PreconditionError("tight certificates are built for p-frame kernels")
    nodes, M = tight_node_system(config)
    a, b = config.space.alpha, config.space.beta
    if kernel.is_polynomial:
        # even p: f itself is positive definite, so h = f
        exact = exact_power_coeffs(kernel)
        coeffs = jacobi.power_to_jacobi(exact, a, b)
        cert = make_certificate(config.space, kernel, _shift(coeffs, delta), config_name=config.name)
        cert.evidence["route"] = "positive-definite kernel"
        return verify_certificate(cert, config) if verify else cert
    if not _monotonic_enough(kernel, M):
        raise PreconditionError(
            f"p = {kernel.p} is not absolutely monotonic of degree {M} with a nonpositive next derivative")
    H = hermite_interpolant(kernel, nodes, "interval")
    coeffs = jacobi.power_to_jacobi(H, a, b)
    cert = make_certificate(config.space, kernel, _shift(coeffs, delta), nodes=nodes,
                            contacts=nodes.distinct(), config_name=config.name)
    cert.evidence["route"] = "hermite"
    return verify_certificate(cert, config) if verify else cert


# -- the 600-cell ------------------------------------------------------------------------

_S5 = sympy.sqrt(5)
CELL600_NODES = (sympy.Integer(-1), (-_S5 - 1) / 4, sympy.Rational(-1, 2), (_S5 - 1) / 4, sympy.Integer(1))
CELL600_COLUMNS = (0, 1, 2, 3, 4, 5, 7, 8)
CELL600_SPACE = SpaceDescriptor(Field.R, 4, Kind.PROJECTIVE)


@lru_cache(maxsize=1)
def _cell600_inverse():
    """Exact inverse of the interpolation matrix over Q(sqrt 5), entries as sympy numbers."""
    from sympy.polys.matrices import DomainMatrix

    a, b = CELL600_SPACE.alpha, CELL600_SPACE.beta
    t = sympy.Symbol("t")
    polys = {n: sum(sympy.Rational(c.numerator, c.denominator) * t**k
                    for k, c in enumerate(jacobi.jacobi_power(a, b, n))) for n in CELL600_COLUMNS}
    rows = [[sympy.expand(polys[n].subs(t, s)) for n in CELL600_COLUMNS] for s in CELL600_NODES]
    rows += [[sympy.expand(sympy.diff(polys[n], t).subs(t, s)) for n in CELL600_COLUMNS] for s in CELL600_NODES[1:4]]
    dom = sympy.QQ.algebraic_field(_S5)
    inv = DomainMatrix.from_list_sympy(8, 8, rows).convert_to(dom).inv().to_Matrix()
    exact = [[sympy.nsimplify(sympy.expand(inv[i, j])) for j in range(8)] for i in range(8)]
    return exact, [[Interval.from_expr(e) for e in row] for row in exact]


def _cell600_rhs(p) -> list:
    """(f(t_1..t_5), f'(t_2..t_4)) enclosed for a point or interval p."""
    p = as_interval(p)
    ts = [Interval.from_expr(s) for s in CELL600_NODES]
    vals = [_pframe_interval(p, t, 0) for t in ts]
    vals += [_pframe_interval(p, t, 1) for t in ts[1:4]]
    return vals


def _pframe_interval(p: Interval, t: Interval, k: int) -> Interval:
    return as_interval(pframe_eval(p, t, k))


def _cell600_rhs_dp(p: Interval) -> list:
    """Partial derivatives in p of the right-hand side."""
    ts = [Interval.from_expr(s) for s in CELL600_NODES]
    out = [Interval(0.0, 0.0)]  # f(-1) = 0 for every p > 0
    for t in ts[1:4]:
        out.append(pframe_dp(p, t))
    out.append(Interval(0.0, 0.0))  # f(1) = 1
    half = Interval(0.5, 0.5)
    for t in ts[1:4]:
        u = (t + 1) * half
        base = u.rpow(p * half - 1)
        # d/dp [(p/4) u^{p/2 - 1}] = u^{p/2-1} / 4 + (p/4)(ln u / 2) u^{p/2-1}
        out.append(base * Interval(0.25, 0.25) + p * Interval(0.25, 0.25) * half * u.log() * base)
    return out


def _cell600_exact_rhs(p: int) -> list:
    half = sympy.Rational(p, 2)
    vals = [((1 + s) / 2) ** half for s in CELL600_NODES]
    vals += [sympy.Rational(p, 4) * ((1 + s) / 2) ** (half - 1) for s in CELL600_NODES[1:4]]
    return vals


def _matvec(mat, vec) -> list:
    out = []
    for row in mat:
        acc = Interval(0.0, 0.0)
        for m, v in zip(row, vec):
            acc = acc + m * v
        out.append(acc)
    return out


def cell600_coefficients(p) -> list:
    """Enclosures of h_0..h_8 (h_6 = 0 exactly) for a point or interval p."""
    exact_inv, inv = _cell600_inverse()
    if not isinstance(p, Interval) and float(p) in (8.0, 10.0):
        rhs = _cell600_exact_rhs(int(p))
        vals = []
        for row in exact_inv:
            v = sympy.nsimplify(sympy.expand(sum(m * r for m, r in zip(row, rhs))))
            vals.append(Interval(0.0, 0.0) if v == 0 else Interval.from_expr(v))
    else:
        vals = _matvec(inv, _cell600_rhs(p))
    out = list(vals[:6]) + [Interval(0.0, 0.0)] + list(vals[6:])
    return out


def build_600cell_certificate(p: float, delta: float = DELTA, verify: bool = True) -> Certificate:
    """Degree-8 certificate with vanishing sixth coefficient for 8 <= p <= 10."""
    if not 8.0 <= float(p) <= 10.0:
        raise PreconditionError("the 600-cell certificate is built for p in [8, 10]")
    coeffs = cell600_coefficients(float(p))
    pairs = [("-1", 1), (str(CELL600_NODES[1]), 2), ("-1/2", 2), (str(CELL600_NODES[3]), 2), ("1", 1)]
    nodes = NodeSystem.from_multiplicities(pairs)
    cert = make_certificate(CELL600_SPACE, PFrame(float(p)), _shift(coeffs, delta), nodes=nodes,
                            contacts=nodes.distinct(), config_name="600-cell")
    cert.evidence["route"] = "600-cell interpolation"
    return verify_certificate(cert) if verify else cert


@dataclass
class RangeVerdict:
    verdict: str  # "verified", "falsified" or "inconclusive"
    cells: list  # (p_lo, p_hi, status)
    offending: list
    samples: dict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "cells": self.cells, "offending": self.offending, "samples": self.samples}


def _cell600_enclosure(lo: float, hi: float) -> list:
    """h_n over p in [lo, hi]: naive form intersected with mean-value forms about both ends."""
    P = Interval(lo, hi)
    if lo == hi:
        return cell600_coefficients(lo)
    _, inv = _cell600_inverse()
    naive = cell600_coefficients(P)
    deriv = _matvec(inv, _cell600_rhs_dp(P))
    deriv = list(deriv[:6]) + [Interval(0.0, 0.0)] + list(deriv[6:])
    out = []
    left, right = cell600_coefficients(lo), cell600_coefficients(hi)
    for n in range(9):
        enc = naive[n]
        for base, off in ((left[n], Interval(0.0, hi - lo)), (right[n], Interval(lo - hi, 0.0))):
            mv = base + deriv[n] * off
            lo_, hi_ = max(enc.lo, mv.lo), min(enc.hi, mv.hi)
            if lo_ <= hi_:
                enc = Interval(lo_, hi_)
        out.append(enc)
    return out


def certify_600cell_range(p_lo: float = 8.0, p_hi: float = 10.0, depth_cap: int = 30,
                          samples: int = 3) -> RangeVerdict:
    """Prove h_n(p) >= 0 for all p in [p_lo, p_hi] by bisection in p.

    In addition, full certificates (including the h <= f sweep) are built and
    verified at the endpoints and ``samples`` interior points.
    """
    if not (8.0 <= p_lo <= p_hi <= 10.0):
        raise PreconditionError("the 600-cell range must lie inside [8, 10]")
    stack = [(float(p_lo), float(p_hi), 0)]
    cells, offending = [], []
    status = "verified"
    while stack:
        lo, hi, depth = stack.pop()
        enc = _cell600_enclosure(lo, hi)
        if all(c.lo >= 0 for c in enc):
            cells.append((lo, hi, "verified"))
            continue
        if lo == hi or any(c.hi < 0 for c in enc):
            if any(c.hi < 0 for c in enc):
                offending.append((lo, hi))
                status = "falsified"
                cells.append((lo, hi, "falsified"))
                continue
        if depth >= depth_cap or lo == hi:
            offending.append((lo, hi))
            if status == "verified":
                status = "inconclusive"
            cells.append((lo, hi, "inconclusive"))
            continue
        mid = lo + (hi - lo) / 2
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    cells.sort()
    pts = sorted({float(p_lo), float(p_hi)} | {p_lo + (p_hi - p_lo) * (i + 1) / (samples + 1) for i in range(samples)})
    sample_verdicts = {}
    for p in pts:
        sample_verdicts[repr(p)] = build_600cell_certificate(p).verdict
    if any(v == "falsified" for v in sample_verdicts.values()):
        status = "falsified"
    elif status == "verified" and any(v != "verified" for v in sample_verdicts.values()):
        status = "inconclusive"
    return RangeVerdict(status, cells, offending, sample_verdicts)


# -- causal variational kernels -------------------------------------------------------------

SPHERE2 = SpaceDescriptor(Field.R, 3, Kind.SPHERE)
ICOSA_TAU_SQ = "2*sqrt(5)/(sqrt(5) - 1)"
ICOSA_H_LEGENDRE = ("1/12", "1/4", "(20 + 3*sqrt(5))/84", "1/4", "(5 - sqrt(5))/28")
ICOSA_H_POWER = ("(1 - sqrt(5))/32", "-1/8", "(3*sqrt(5) - 5)/16", "5/8", "5*(5 - sqrt(5))/32")
ICOSA_H_FACTORED = "5*(5 - sqrt(5))/32*(t + 1)*(t - 1/sqrt(5))*(t + 1/sqrt(5))"


def exact_power_to_jacobi(power, alpha, beta) -> list:
    """Jacobi coefficients of a polynomial with exact (sympy-parsable) power coefficients."""
    t = sympy.Symbol("t")
    poly = sympy.Poly(sum(sympy.sympify(c) * t**k for k, c in enumerate(power)), t)
    deg = len(power) - 1
    out = [sympy.Integer(0)] * (deg + 1)
    for n in range(deg, -1, -1):
        basis = jacobi.jacobi_power(alpha, beta, n)
        cn = sympy.Poly(sum(sympy.Rational(v.numerator, v.denominator) * t**k for k, v in enumerate(basis)), t)
        coef = sympy.nsimplify(sympy.simplify(poly.coeff_monomial(t**n) / cn.coeff_monomial(t**n)))
        out[n] = coef
        poly = poly - cn * coef
    return out


def _exact_jacobi_intervals(coeffs) -> list:
    return [Interval(0.0, 0.0) if sympy.simplify(c) == 0 else Interval.from_expr(c) for c in coeffs]


def causal_certificate(which: str, delta: float = DELTA, verify: bool = True) -> Certificate:
    """Fixed auxiliary polynomials for the causal kernel on S^2."""
    if which == "cross_polytope":
        kernel = Causal("2", normalized=False)
        coeffs = jacobi.power_to_jacobi([Fraction(0), Fraction(8), Fraction(8)], 0, 0)
        contacts = [("-1", 1), ("0", 1), ("1", 1)]
        cert = make_certificate(SPHERE2, kernel, _shift(coeffs, delta), contacts=contacts,
                                config_name="cross-polytope-s2")
    elif which == "icosahedron":
        kernel = Causal(ICOSA_TAU_SQ, normalized=True)
        coeffs = [Interval.from_expr(c) for c in ICOSA_H_LEGENDRE]
        contacts = [("-1", 1), ("-sqrt(5)/5", 2), ("sqrt(5)/5", 1), ("1", 1)]
        cert = make_certificate(SPHERE2, kernel, _shift(coeffs, delta), contacts=contacts,
                                config_name="icosahedron-s2")
        # the printed power form and Legendre form must agree; the printed cubic factorization does not
        from_power = exact_power_to_jacobi(ICOSA_H_POWER, 0, 0)
        same = all(sympy.simplify(x - sympy.sympify(y)) == 0 for x, y in zip(from_power, ICOSA_H_LEGENDRE))
        t = sympy.Symbol("t")
        power_poly = sum(sympy.sympify(c) * t**k for k, c in enumerate(ICOSA_H_POWER))
        factored = sympy.simplify(sympy.expand(power_poly - sympy.sympify(ICOSA_H_FACTORED, locals={"t": t}))) == 0
        cert.evidence["power_matches_legendre"] = bool(same)
        cert.evidence["factorization_matches"] = bool(factored)
    else:
        raise ValueError("which must be 'cross_polytope' or 'icosahedron'")
    cert.evidence["route"] = "causal"
    return verify_certificate(cert) if verify else cert


# -- moment-constrained maximization -------------------------------------------------------

def moment_certificate(config: WeightedConfiguration, delta: float = DELTA, verify: bool = True) -> Certificate:
    """Upper certificate for max I_{C_{k+1}} subject to vanishing moments 1..k."""
    nodes, k = tight_node_system(config)
    a, b = config.space.alpha, config.space.beta
    target = Poly(tuple(jacobi.jacobi_power(a, b, k + 1)))
    # deg C_{k+1} equals the node count, so h = C_{k+1} - lead * prod (t - r_i) exactly
    t = sympy.Symbol("t")
    lead = target.coeffs[-1]
    f = sum(sympy.Rational(c.numerator, c.denominator) * t**j for j, c in enumerate(target.coeffs))
    g = sympy.prod([t - r for r in nodes.exact()])
    h = sympy.Poly(sympy.expand(f - sympy.Rational(lead.numerator, lead.denominator) * g), t)
    power = [h.coeff_monomial(t**j) for j in range(k + 1)]
    coeffs = _exact_jacobi_intervals(exact_power_to_jacobi(power, a, b))
    coeffs[0] = coeffs[0] + Interval.point(delta)
    cert = make_certificate(config.space, target, coeffs, nodes=nodes, contacts=nodes.distinct(),
                            config_name=config.name, sense="upper", constrained_degree=k)
    cert.evidence["attained"] = energy_value(config, target)
    cert.evidence["route"] = "moment"
    return verify_certificate(cert, config) if verify else cert
