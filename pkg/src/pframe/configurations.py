"""Weighted configurations, the named catalog, and design checks.

A configuration is a finite set of unit vectors with probability weights,
viewed as points of a sphere or of a projective space. Catalog entries record
their expected design strength, absolute inner products and energies so the
checks in this module (and the reproduction harness) can compare against them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import jacobi
from .spaces import Field, Kind, SpaceDescriptor, norms, tau_matrix, unit_vector

PHI = (1.0 + math.sqrt(5.0)) / 2.0
DEDUP_TOL = 1e-9
DESIGN_TOL = 1e-10


class ConfigurationError(ValueError):
    pass


@dataclass
class WeightedConfiguration:
    space: SpaceDescriptor
    points: np.ndarray
    weights: np.ndarray
    name: str = ""
    orbits: Optional[list] = None  # index arrays of points sharing a weight class

    def __post_init__(self):
        self.points = unit_vector(self.points, self.space.field)
        self.weights = np.asarray(self.weights, dtype=float).copy()
        n = self.points.shape[0]
        if self.weights.shape != (n,):
            raise ConfigurationError(f"expected {n} weights, got shape {self.weights.shape}")
        if np.any(self.weights < 0):
            raise ConfigurationError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > 1e-13 * max(1, n):
            raise ConfigurationError(f"weights sum to {self.weights.sum()!r}, not 1")
        dim = self.points.shape[-2] if self.space.field is Field.H else self.points.shape[-1]
        if dim != self.space.d:
            raise ConfigurationError(f"points have dimension {dim}, space expects {self.space.d}")

    @property
    def n_points(self) -> int:
        return int(self.points.shape[0])

    def tau(self) -> np.ndarray:
        return tau_matrix(self.points, self.space)

    def with_weights(self, weights) -> "WeightedConfiguration":
        return replace(self, weights=np.asarray(weights, dtype=float))

    def with_points(self, points) -> "WeightedConfiguration":
        return replace(self, points=np.asarray(points))


def uniform(space: SpaceDescriptor, points, name: str = "") -> WeightedConfiguration:
    pts = np.asarray(points)
    n = pts.shape[0]
    return WeightedConfiguration(space, pts, np.full(n, 1.0 / n), name=name, orbits=[np.arange(n)])


def _weighted(space, parts, part_weights, name) -> WeightedConfiguration:
    """Union of point families, every point of family k weighted part_weights[k]."""
    pts = np.concatenate([np.asarray(p) for p in parts], axis=0)
    w = np.concatenate([np.full(len(p), float(wk)) for p, wk in zip(parts, part_weights)])
    orbits, start = [], 0
    for p in parts:
        orbits.append(np.arange(start, start + len(p)))
        start += len(p)
    w = w / w.sum()  # absorbs the last-ulp error of the rational weights
    return WeightedConfiguration(space, pts, w, name=name, orbits=orbits)


# -- helpers for building line systems ----------------------------------------

def unique_lines(vectors, field=Field.R, tol: float = 1e-9) -> np.ndarray:
    """Keep one representative per projective line (|<x, y>| = 1)."""
    vecs = unit_vector(np.asarray(vectors), field)
    keep: list[int] = []
    for i in range(len(vecs)):
        ok = True
        for j in keep:
            if field is Field.H:
                from .spaces import abs_gram

                val = abs_gram(vecs[[i, j]], field)[0, 1]
            else:
                val = abs(np.vdot(vecs[j], vecs[i]))
            if val > 1 - tol:
                ok = False
                break
        if ok:
            keep.append(i)
    return vecs[keep]


def _sign_vectors(base, even_only=False):
    base = np.asarray(base, dtype=float)
    nz = np.nonzero(base)[0]
    out = []
    for signs in itertools.product([1.0, -1.0], repeat=len(nz)):
        if even_only and sum(s < 0 for s in signs) % 2:
            continue
        v = base.copy()
        v[nz] = v[nz] * np.array(signs)
        out.append(v)
    return out


def _cyclic(v):
    v = np.asarray(v)
    return [np.roll(v, k) for k in range(len(v))]


def _perms(v):
    return [np.array(q) for q in sorted(set(itertools.permutations(tuple(v))))]


def _orth_complement_basis(vectors, dim):
    """Orthonormal basis (rows) of the orthogonal complement of span(vectors)."""
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > 1e-12))
    return vt[rank:dim]


def e8_roots() -> np.ndarray:
    roots = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product([1.0, -1.0], repeat=2):
            v = np.zeros(8)
            v[i], v[j] = si, sj
            roots.append(v)
    for signs in itertools.product([0.5, -0.5], repeat=8):
        if sum(s < 0 for s in signs) % 2 == 0:
            roots.append(np.array(signs))
    return np.array(roots)


# -- catalog constructions ------------------------------------------------------

def build_ngon(n: int) -> WeightedConfiguration:
    """n lines through a regular 2n-gon, as n points of S^1 with doubled angles."""
    ang = 2 * np.pi * np.arange(n) / n
    return uniform(SpaceDescriptor(Field.R, 2, Kind.SPHERE), np.stack([np.cos(ang), np.sin(ang)], axis=1), f"ngon-{n}")


def build_orthobasis(d: int, field=Field.R) -> WeightedConfiguration:
    field = Field.parse(field)
    eye = np.eye(d)
    if field is Field.C:
        pts = eye.astype(complex)
    elif field is Field.H:
        pts = np.zeros((d, d, 4))
        pts[:, :, 0] = eye
    else:
        pts = eye
    suffix = "" if field is Field.R else f"-{field.value}"
    return uniform(SpaceDescriptor(field, d, Kind.PROJECTIVE), pts, f"orthobasis-{d}{suffix}")


def _icosa_lines():
    vecs = []
    for s in _sign_vectors([0.0, 1.0, PHI]):
        vecs.extend(_cyclic(s))
    return unique_lines(vecs)


def _dodeca_lines():
    vecs = _sign_vectors([1.0, 1.0, 1.0])
    # face centres of the icosahedron above
    for s in _sign_vectors([0.0, PHI, 1.0 / PHI]):
        vecs.extend(_cyclic(s))
    return unique_lines(vecs)


def build_cross_polytope_s2():
    """The six vertices +-e_i of the octahedron as points of S^2."""
    eye = np.eye(3)
    return uniform(SpaceDescriptor(Field.R, 3, Kind.SPHERE), np.concatenate([eye, -eye]), "cross-polytope-s2")


def build_icosahedron_s2():
    """The twelve icosahedron vertices as points of S^2."""
    lines = _icosa_lines()
    return uniform(SpaceDescriptor(Field.R, 3, Kind.SPHERE), np.concatenate([lines, -lines]), "icosahedron-s2")


def build_icosahedron():
    return uniform(SpaceDescriptor(Field.R, 3, Kind.PROJECTIVE), _icosa_lines(), "icosahedron")


def build_icosa_dodeca():
    return _weighted(
        SpaceDescriptor(Field.R, 3, Kind.PROJECTIVE),
        [_icosa_lines(), _dodeca_lines()],
        [Fraction(5, 84), Fraction(9, 140)],
        "icosa-dodeca",
    )


def build_reznick():
    r7 = math.sqrt(7.0)
    a, b = 2 / r7, math.sqrt(3 / 7)
    c = 1 / r7
    parts = [
        [[1.0, 0, 0]],
        [[0, 1.0, 0]],
        [[0, 0, 1.0]],
        [[a, b, 0], [a, -b, 0], [a, 0, b], [a, 0, -b], [c, b, b], [c, b, -b], [c, -b, b], [c, -b, -b]],
    ]
    return _weighted(
        SpaceDescriptor(Field.R, 3, Kind.PROJECTIVE),
        [np.array(p) for p in parts],
        [Fraction(2, 27), Fraction(1, 10), Fraction(1, 10), Fraction(49, 540)],
        "reznick-11",
    )


def _r4_11_gram():
    import sympy

    s5, s2, s6 = sympy.sqrt(5), sympy.sqrt(2), sympy.sqrt(6)
    a = (s5 + 1) / 6
    b = sympy.sqrt(6 - 2 * s5) / 6
    t = sympy.Rational(1, 3)
    r = s2 / 3
    q = s6 / 6
    rows = [
        [1, -2 * t, a, a, a, a, b, b, b, b, q],
        [-2 * t, 1, -b, -b, -b, -b, -a, -a, -a, -a, q],
        [a, -b, 1, t, -t, t, -r, -r, r, r, q],
        [a, -b, t, 1, t, -t, r, -r, r, -r, q],
        [a, -b, -t, t, 1, t, r, r, -r, -r, q],
        [a, -b, t, -t, t, 1, -r, r, -r, r, q],
        [b, -a, -r, r, r, -r, 1, t, t, -t, -q],
        [b, -a, -r, -r, r, r, t, 1, -t, t, -q],
        [b, -a, r, r, -r, -r, t, -t, 1, t, -q],
        [b, -a, r, -r, -r, r, -t, t, t, 1, -q],
        [q, q, q, q, q, q, -q, -q, -q, -q, 1],
    ]
    return sympy.Matrix(rows)


def build_r4_11():
    g = _r4_11_gram()
    gf = np.array(g.evalf(30).tolist(), dtype=float)
    w = [Fraction(3, 40)] * 2 + [Fraction(3, 32)] * 8 + [Fraction(1, 10)]
    cfg = from_gram(gf, [float(x) for x in w], SpaceDescriptor(Field.R, 4, Kind.PROJECTIVE))
    cfg.name = "r4-11"
    cfg.orbits = [np.arange(0, 2), np.arange(2, 10), np.array([10])]
    return cfg


def _d4_lines():
    vecs = []
    for i, j in itertools.combinations(range(4), 2):
        v = np.zeros(4)
        v[i] = v[j] = 1.0
        vecs.extend(_sign_vectors(v))
    return unique_lines(vecs)


def _d4_dual_lines():
    vecs = [np.eye(4)[i] for i in range(4)]
    vecs.extend(_sign_vectors([0.5, 0.5, 0.5, 0.5]))
    return unique_lines(vecs)


def build_24cell():
    """The 24 lines of the D4 roots together with the 24-cell vertices (F4 roots)."""
    return uniform(SpaceDescriptor(Field.R, 4, Kind.PROJECTIVE), np.concatenate([_d4_lines(), _d4_dual_lines()]), "24-cell")


def build_d4_roots():
    return uniform(SpaceDescriptor(Field.R, 4, Kind.PROJECTIVE), _d4_lines(), "d4-roots")


def icosians() -> np.ndarray:
    """The 120 unit quaternions forming the vertices of the 600-cell."""
    vecs = []
    for i in range(4):
        for s in (1.0, -1.0):
            v = np.zeros(4)
            v[i] = s
            vecs.append(v)
    vecs.extend(_sign_vectors([0.5, 0.5, 0.5, 0.5]))
    even = [p for p in itertools.permutations(range(4)) if _perm_parity(p) == 0]
    base = [PHI / 2, 0.5, 1 / (2 * PHI), 0.0]
    for s in _sign_vectors(base):
        for p in even:
            vecs.append(np.array([s[p[k]] for k in range(4)]))
    return np.array(vecs)


def _perm_parity(p) -> int:
    p = list(p)
    parity = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                parity ^= 1
    return parity


def build_600cell():
    return uniform(SpaceDescriptor(Field.R, 4, Kind.PROJECTIVE), unique_lines(icosians()), "600-cell")


def _in_sum_zero_plane(vectors, n):
    basis = _orth_complement_basis(np.ones((1, n)), n)
    return np.asarray(vectors) @ basis.T


def build_hemicube5():
    a = [_perms(np.array([-5.0, 1, 1, 1, 1, 1]))[k] for k in range(6)]
    b = _perms(np.array([1.0, 1, 1, -1, -1, -1]))
    la = unique_lines(_in_sum_zero_plane(a, 6))
    lb = unique_lines(_in_sum_zero_plane(b, 6))
    return _weighted(SpaceDescriptor(Field.R, 5, Kind.PROJECTIVE), [la, lb], [Fraction(5, 84), Fraction(9, 140)], "hemicube-5")


def build_stroud():
    a = [np.eye(5)[i] for i in range(5)]
    b = []
    for i, j in itertools.combinations(range(5), 2):
        v = np.zeros(5)
        v[i] = v[j] = 1.0
        b.extend(_sign_vectors(v))
    c = _sign_vectors(np.ones(5))
    parts = [unique_lines(a), unique_lines(b), unique_lines(c)]
    return _weighted(
        SpaceDescriptor(Field.R, 5, Kind.PROJECTIVE), parts, [Fraction(2, 105), Fraction(8, 315), Fraction(25, 1008)], "stroud-41"
    )


def build_cross_hemicube6():
    cross = np.eye(6)
    hemi = unique_lines(_sign_vectors(np.ones(6), even_only=True))
    return _weighted(
        SpaceDescriptor(Field.R, 6, Kind.PROJECTIVE), [cross, hemi], [Fraction(1, 24), Fraction(3, 64)], "cross-hemicube-6"
    )


def _e8_subsystems():
    roots = e8_roots()
    r = roots[0]  # e1 + e2
    return roots, r


def build_kissing_e8():
    roots, r = _e8_subsystems()
    sel = roots[np.isclose(roots @ r, 1.0)]
    basis = _orth_complement_basis(r[None, :], 8)
    lines = unique_lines((sel - r / 2) @ basis.T)
    return uniform(SpaceDescriptor(Field.R, 7, Kind.PROJECTIVE), lines, "kissing-e8")


def build_e7_e7dual():
    roots, r = _e8_subsystems()
    basis = _orth_complement_basis(r[None, :], 8)
    e7 = unique_lines(roots[np.isclose(roots @ r, 0.0)] @ basis.T)
    dual = unique_lines((roots[np.isclose(roots @ r, 1.0)] - r / 2) @ basis.T)
    return _weighted(SpaceDescriptor(Field.R, 7, Kind.PROJECTIVE), [e7, dual], [Fraction(8, 693), Fraction(3, 308)], "e7-e7dual")


def build_e6_e6dual():
    roots = e8_roots()
    r1 = roots[0]
    cands = roots[np.isclose(roots @ r1, -1.0)]
    r2 = cands[0]
    a2 = np.stack([r1, r2])
    basis = _orth_complement_basis(a2, 8)
    e6 = unique_lines(roots[np.isclose(roots @ r1, 0.0) & np.isclose(roots @ r2, 0.0)] @ basis.T)
    sel = roots[np.isclose(roots @ r1, 1.0) & np.isclose(roots @ r2, 0.0)]
    dual = unique_lines(sel @ basis.T)
    return _weighted(SpaceDescriptor(Field.R, 6, Kind.PROJECTIVE), [e6, dual], [Fraction(1, 60), Fraction(2, 135)], "e6-e6dual")


def build_simplex_midpoints8():
    vecs = []
    for i, j in itertools.combinations(range(9), 2):
        v = np.zeros(9)
        v[i] = v[j] = 1.0
        vecs.append(v)
    return uniform(SpaceDescriptor(Field.R, 8, Kind.PROJECTIVE), unique_lines(_in_sum_zero_plane(vecs, 9)), "simplex-midpoints-8")


def build_e8_roots():
    return uniform(SpaceDescriptor(Field.R, 8, Kind.PROJECTIVE), unique_lines(e8_roots()), "e8-roots")


def _hesse_sic():
    w = np.exp(2j * np.pi / 3)
    shift = np.roll(np.eye(3), 1, axis=0)
    clock = np.diag([1, w, w * w])
    fid = np.array([0, 1, -1]) / math.sqrt(2)
    out = []
    for a in range(3):
        for b in range(3):
            out.append(np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) @ fid)
    return np.array(out)


def _mub3():
    w = np.exp(2j * np.pi / 3)
    out = [np.eye(3, dtype=complex)[i] for i in range(3)]
    for k in range(3):
        for a in range(3):
            out.append(np.array([w ** (a * j + k * j * j) for j in range(3)]) / math.sqrt(3))
    return np.array(out)


def build_sic3():
    return uniform(SpaceDescriptor(Field.C, 3, Kind.PROJECTIVE), _hesse_sic(), "sic-3")


def build_sic2():
    w = np.exp(2j * np.pi / 3)
    pts = [np.array([1.0, 0.0], dtype=complex)]
    for k in range(3):
        pts.append(np.array([1 / math.sqrt(3), math.sqrt(2 / 3) * w**k]))
    return uniform(SpaceDescriptor(Field.C, 2, Kind.PROJECTIVE), np.array(pts), "sic-2")


def build_c3_21():
    return _weighted(
        SpaceDescriptor(Field.C, 3, Kind.PROJECTIVE), [_hesse_sic(), _mub3()], [Fraction(4, 90), Fraction(1, 20)], "c3-21"
    )


def code85_parts():
    """The two families X1 (45 vectors) and X2 (40 vectors) in C^5, plus Psi.

    X2 is the set of lines spanned by vectors with three nonzero coordinates of
    modulus 1/sqrt(3) and sixth-root-of-unity phases whose inner products with
    every X1 vector have modulus 0 or 1/sqrt(3). The printed transformation of
    Psi is not unitary, so X2 is generated from this characterization instead;
    Psi has the same inner-product census as X2 and is returned for reference.
    """
    w = np.exp(2j * np.pi / 3)
    x1 = [np.roll(np.array([1, 0, 0, 0, 0], dtype=complex), k) for k in range(5)]
    for s1, s2, s3 in itertools.product([1, -1], repeat=3):
        x1.extend(_cyclic(np.array([0, 1, s1 * w, s2 * w, s3], dtype=complex) / 2))
    x1 = np.array(x1)
    psi = []
    for s1, s2 in itertools.product([1, -1], repeat=2):
        psi.extend(_cyclic(np.array([1, 0, s1 * w, s2 * w, 0], dtype=complex) / math.sqrt(3)))
    for s1, s2 in itertools.product([1, -1], repeat=2):
        psi.extend(_cyclic(np.array([1, s1 * w, s2, 0, 0], dtype=complex) / math.sqrt(3)))
    roots = np.exp(1j * np.pi * np.arange(6) / 3)
    r3 = 1 / math.sqrt(3)
    cands = []
    for sup in itertools.combinations(range(5), 3):
        for a, b in itertools.product(roots, repeat=2):
            v = np.zeros(5, dtype=complex)
            v[list(sup)] = [1, a, b]
            v *= r3
            m = np.abs(x1.conj() @ v)
            if np.all((m < 1e-9) | (np.abs(m - r3) < 1e-9)):
                cands.append(v)
    x2 = unique_lines(np.array(cands), field=Field.C)
    return x1, x2, np.array(psi)


def build_code85():
    x1, x2, _ = code85_parts()
    return _weighted(SpaceDescriptor(Field.C, 5, Kind.PROJECTIVE), [x1, x2], [Fraction(4, 315), Fraction(3, 280)], "85-code")


# -- catalog ---------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyTarget:
    p: float
    value: float
    source: str
    weights: str = "design"  # "design" or "optimal" (p-optimal weights on the orbits)
    tol: float = 1e-12


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Optional[Callable[[], WeightedConfiguration]]
    description: str
    n_lines: int
    strength: Optional[int]
    abs_inner: tuple = ()  # exact off-diagonal |<x, y>| values as sympy strings
    tight: Optional[int] = None
    energies: tuple = ()
    notes: str = ""
    counts: tuple = ()  # alternative counts, e.g. sphere point totals

    @property
    def constructible(self) -> bool:
        return self.builder is not None


def _entries() -> dict[str, CatalogEntry]:
    t1, t2 = "real projective goldens", "complex projective goldens"
    items = [
        CatalogEntry("icosahedron", build_icosahedron, "6 lines through the icosahedron vertices", 6, 2,
                     ("1/sqrt(5)",), tight=2,
                     energies=(EnergyTarget(3, 0.241202265916660, t1),)),
        CatalogEntry("reznick-11", build_reznick, "11-line weighted 3-design in R^3", 11, 3,
                     ("0", "1/7", "4/7", "5/7", "sqrt(1/7)", "sqrt(3/7)", "sqrt(4/7)"),
                     energies=(EnergyTarget(6, 1 / 7, t1),)),
        CatalogEntry("icosa-dodeca", build_icosa_dodeca, "icosahedron and dodecahedron lines", 16, 4,
                     ("1/3", "1/sqrt(5)", "sqrt(5/9)", "sqrt(75+30*sqrt(5))/15", "sqrt((5-2*sqrt(5))/15)"),
                     energies=(EnergyTarget(7, 0.124867143799450, t1, "optimal"),)),
        CatalogEntry("r4-11", build_r4_11, "11-line weighted 2-design in R^4 given by its Gram matrix", 11, 2,
                     ("1/3", "2/3", "sqrt(2)/3", "sqrt(6)/6", "(sqrt(5)+1)/6", "sqrt(6-2*sqrt(5))/6"),
                     energies=(EnergyTarget(4, 0.125, t1),)),
        CatalogEntry("24-cell", build_24cell, "D4 roots with the 24-cell vertices (24 lines, F4 roots)", 24, 3,
                     ("0", "1/2", "1/sqrt(2)"),
                     energies=(EnergyTarget(5, 0.096277507157493, t1),),
                     notes="12 lines from the D4 roots alone are available as 'd4-roots'", counts=(24, 48, 12)),
        CatalogEntry("d4-roots", build_d4_roots, "12 lines through the D4 roots", 12, 2, ("0", "1/2")),
        CatalogEntry("600-cell", build_600cell, "60 lines through the 600-cell vertices", 60, 5,
                     ("0", "1/2", "(sqrt(5)-1)/4", "(sqrt(5)+1)/4"),
                     energies=(EnergyTarget(9, 0.047015486159502, t1),)),
        CatalogEntry("hemicube-5", build_hemicube5, "16-line weighted 2-design in R^5", 16, 2,
                     ("1/5", "1/3", "1/sqrt(5)"),
                     energies=(EnergyTarget(3, 0.118257675970387, t1, "optimal"),)),
        CatalogEntry("stroud-41", build_stroud, "41-line weighted 3-design in R^5", 41, 3,
                     ("0", "1/5", "1/2", "3/5", "1/sqrt(2)", "1/sqrt(5)", "sqrt(2/5)"),
                     energies=(EnergyTarget(5, 0.061838820473855, t1, "optimal"),)),
        CatalogEntry("cross-hemicube-6", build_cross_hemicube6, "cross-polytope and hemicube lines in R^6", 22, 2,
                     ("0", "1/3", "1/sqrt(6)"),
                     energies=(EnergyTarget(3, 0.090559619406078, t1, "optimal"),)),
        CatalogEntry("e6-e6dual", build_e6_e6dual, "E6 and E6* minimal vector lines", 63, 3,
                     ("0", "1/4", "1/2", "sqrt(3/8)"),
                     energies=(EnergyTarget(5, 0.042488105634495, t1, "optimal"),)),
        CatalogEntry("kissing-e8", build_kissing_e8, "28 lines of the E8 kissing configuration", 28, 2,
                     ("1/3",), tight=2,
                     energies=(EnergyTarget(3, 1 / 14, t1),)),
        CatalogEntry("e7-e7dual", build_e7_e7dual, "E7 and E7* minimal vector lines", 91, 3,
                     ("0", "1/3", "1/2", "1/sqrt(3)"),
                     energies=(EnergyTarget(5, 0.030645893660944, t1, "optimal"),)),
        CatalogEntry("simplex-midpoints-8", build_simplex_midpoints8, "edge midpoints of the regular simplex in R^8", 36, 1,
                     ("2/7", "5/14"),
                     energies=(EnergyTarget(3, 0.059098639455782, t1),)),
        CatalogEntry("e8-roots", build_e8_roots, "120 lines through the E8 roots", 120, 3,
                     ("0", "1/2"), tight=3,
                     energies=(EnergyTarget(5, 0.022916666666667, t1),)),
        CatalogEntry("sic-2", build_sic2, "SIC in C^2 (tetrahedron)", 4, 2, ("1/sqrt(3)",), tight=2),
        CatalogEntry("sic-3", build_sic3, "Hesse SIC in C^3", 9, 2, ("1/2",), tight=2,
                     energies=(EnergyTarget(3, 0.222222222222222, t2),)),
        CatalogEntry("c3-21", build_c3_21, "Hesse SIC with four mutually unbiased bases in C^3", 21, 3,
                     ("0", "1/2", "1/sqrt(3)", "1/sqrt(2)"),
                     energies=(EnergyTarget(5, 0.12610934678518, t2 + " (leading digit restored)", "optimal"),)),
        CatalogEntry("85-code", build_code85, "85-line weighted 3-design in C^5", 85, 3,
                     ("0", "1/3", "1/2", "1/sqrt(3)"),
                     energies=(EnergyTarget(5, 0.041997097378053, t2, "optimal"),)),
        CatalogEntry("equiangular-276", None, "276 equiangular lines in R^23", 276, 2, ("1/5",), tight=2,
                     energies=(EnergyTarget(3, 0.011594202898551, t1),), notes="coordinates not bundled"),
        CatalogEntry("kissing-leech", None, "2300 lines of the Leech kissing configuration", 2300, 3, ("0", "1/3"), tight=3,
                     energies=(EnergyTarget(5, 0.002028985507246, t1),), notes="coordinates not bundled"),
        CatalogEntry("leech-roots", None, "98280 lines through the Leech lattice minimal vectors", 98280, 5,
                     ("0", "1/4", "1/2"), tight=5,
                     energies=(EnergyTarget(9, 0.000103419439357, t1),), notes="coordinates not bundled"),
    ]
    return {e.name: e for e in items}


CATALOG: dict[str, CatalogEntry] = _entries()
_SPHERE_BUILDERS = {"cross-polytope-s2": build_cross_polytope_s2, "icosahedron-s2": build_icosahedron_s2}


def catalog_names(constructible_only: bool = True) -> list[str]:
    return [n for n, e in CATALOG.items() if e.constructible or not constructible_only]


@lru_cache(maxsize=None)
def _cached(name: str) -> WeightedConfiguration:
    return _build(name)


def _build(name: str) -> WeightedConfiguration:
    import re

    m = re.fullmatch(r"ngon-(\d+)", name)
    if m:
        return build_ngon(int(m.group(1)))
    m = re.fullmatch(r"orthobasis-(\d+)(?:-([RCH]))?", name)
    if m:
        return build_orthobasis(int(m.group(1)), m.group(2) or "R")
    if name in _SPHERE_BUILDERS:
        return _SPHERE_BUILDERS[name]()
    entry = CATALOG.get(name)
    if entry is None:
        raise KeyError(f"unknown catalog entry {name!r}")
    if entry.builder is None:
        raise KeyError(f"catalog entry {name!r} is metadata only ({entry.notes})")
    return entry.builder()


def catalog_get(name: str) -> WeightedConfiguration:
    """A fresh copy of a named configuration with its design weights."""
    cfg = _cached(name)
    return replace(cfg, points=cfg.points.copy(), weights=cfg.weights.copy(),
                   orbits=[o.copy() for o in cfg.orbits] if cfg.orbits is not None else None)


def catalog_entry(name: str) -> Optional[CatalogEntry]:
    return CATALOG.get(name)


def expected_tau(name: str) -> list:
    """Exact tau values (sympy) of a catalog entry, including tau = 1."""
    import sympy

    entry = CATALOG[name]
    vals = {sympy.nsimplify(sympy.simplify(2 * sympy.sympify(a) ** 2 - 1)) for a in entry.abs_inner}
    vals.add(sympy.Integer(1))
    return sorted(vals, key=lambda v: float(v))


# -- distance data and design checks -------------------------------------------------

@dataclass
class DistanceSet:
    values: list  # floats, sorted
    counts: list  # ordered pairs (i, j) including i == j
    exact: Optional[list] = None

    def as_dict(self) -> dict:
        return {repr(v): c for v, c in zip(self.values, self.counts)}


def _cluster(values: np.ndarray, tol: float):
    order = np.sort(values.ravel())
    reps, counts = [], []
    for v in order:
        if reps and abs(v - reps[-1][-1]) <= tol:
            reps[-1].append(v)
            counts[-1] += 1
        else:
            reps.append([v])
            counts.append(1)
    return [float(np.mean(r)) for r in reps], counts


def distance_set(config: WeightedConfiguration, tol: float = DEDUP_TOL, exact: Optional[list] = None) -> DistanceSet:
    """Sorted distinct tau values with pair counts; snaps to exact values when given."""
    vals, counts = _cluster(config.tau(), tol)
    matched = None
    if exact is not None:
        matched = []
        for v in vals:
            hit = [e for e in exact if abs(float(e) - v) <= 1e-7]
            if len(hit) != 1:
                matched = None
                break
            matched.append(hit[0])
        if matched is not None:
            vals = [float(e) for e in matched]
    if vals and vals[-1] > 1 - tol:
        vals[-1] = 1.0
    return DistanceSet(vals, counts, matched)


def abs_inner_census(a, b=None, field=Field.C, decimals: int = 9) -> dict:
    """Counts of |<x, y>| values over all ordered pairs between two families."""
    from .spaces import abs_gram

    b = a if b is None else b
    if field is Field.H:
        g = abs_gram(np.concatenate([a, b]), field)[: len(a), len(a):]
    else:
        g = np.abs(np.asarray(a) @ np.asarray(b).conj().T)
    vals, counts = np.unique(np.round(g, decimals), return_counts=True)
    return {float(v): int(c) for v, c in zip(vals, counts)}


@dataclass
class StrengthReport:
    strength: int
    residuals: list  # residual for n = 1..max_t

    def to_json(self) -> dict:
        return {"strength": self.strength, "residuals": [float(r) for r in self.residuals]}


def design_moments(config: WeightedConfiguration, max_n: int) -> np.ndarray:
    """sum_{i,j} w_i w_j C_n(tau_ij) for n = 0..max_n."""
    a, b = config.space.params
    table = jacobi.jacobi_eval_all(a, b, max_n, config.tau())
    w = config.weights
    return np.array([w @ table[n] @ w for n in range(max_n + 1)])


def design_strength(config: WeightedConfiguration, max_t: int = 10, tol: float = DESIGN_TOL) -> StrengthReport:
    if max_t < 1:
        raise ValueError("max_t must be at least 1")
    mom = design_moments(config, max_t)
    res = [float(abs(m)) for m in mom[1:]]
    t = 0
    for r in res:
        if r > tol:
            break
        t += 1
    return StrengthReport(t, res)


@dataclass
class Tightness:
    status: str  # "tight", "not_tight" or "inconclusive"
    strength: int
    m: int  # number of distances between distinct elements
    has_antipode: bool

    def __str__(self) -> str:
        return f"tight({self.strength})" if self.status == "tight" else self.status


def tightness_check(config: WeightedConfiguration, tol: float = DESIGN_TOL) -> Tightness:
    ds = distance_set(config)
    off = [v for v in ds.values if v < 1.0 - DEDUP_TOL]
    m = len(off)
    antipode = any(v <= -1.0 + DEDUP_TOL for v in off)
    rep = design_strength(config, max_t=2 * m + 2, tol=tol)
    t = rep.strength
    # residuals sitting between the design tolerance and clear nonzero values are ambiguous
    nxt = rep.residuals[t] if t < len(rep.residuals) else 0.0
    if tol < nxt < 1e-6:
        return Tightness("inconclusive", t, m, antipode)
    if m >= 1 and ((t == 2 * m - 1 and antipode) or t == 2 * m):
        return Tightness("tight", t, m, antipode)
    return Tightness("not_tight", t, m, antipode)


def interior_annihilator(config: WeightedConfiguration) -> list:
    """Monic power coefficients of prod (t - s) over distances strictly inside (-1, 1)."""
    ds = distance_set(config)
    poly = np.array([1.0])
    for v in ds.values:
        if -1 + DEDUP_TOL < v < 1 - DEDUP_TOL:
            poly = np.convolve(poly, [-v, 1.0])
    return list(poly)


# -- Gram realization ----------------------------------------------------------------

def from_gram(gram, weights, space: SpaceDescriptor, tol: float = 1e-10) -> WeightedConfiguration:
    """Realize a Gram matrix by vectors in F^d (eigendecomposition)."""
    g = np.asarray(gram)
    if space.field is Field.H:
        raise ConfigurationError("quaternionic Gram realization is not supported")
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ConfigurationError("Gram matrix must be square")
    if not np.allclose(np.diag(g), 1.0, atol=tol):
        raise ConfigurationError("Gram matrix must have unit diagonal")
    if not np.allclose(g, g.conj().T, atol=tol):
        raise ConfigurationError("Gram matrix must be Hermitian")
    evals, evecs = np.linalg.eigh(g)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if evals[0] < -tol * scale:
        raise ConfigurationError(f"Gram matrix is not positive semidefinite (eigenvalue {evals[0]:.3e})")
    rank = int(np.sum(evals > tol * scale))
    if rank > space.d:
        raise ConfigurationError(f"Gram matrix has rank {rank} > d = {space.d}")
    idx = np.argsort(evals)[::-1][: space.d]
    pts = evecs[:, idx] * np.sqrt(np.clip(evals[idx], 0.0, None))
    if space.field is Field.R:
        pts = np.real(pts)
    cfg = WeightedConfiguration(space, pts, np.asarray(weights, dtype=float))
    if space.field is Field.R:
        realized = cfg.points @ cfg.points.T
    else:
        realized = cfg.points @ cfg.points.conj().T
    if not np.allclose(realized, g, atol=tol):
        raise ConfigurationError("realized Gram matrix does not match the input")
    return cfg


# -- p-optimal weights on orbits ------------------------------------------------------

def orbit_matrix(config: WeightedConfiguration, kernel) -> np.ndarray:
    """M[a, b] = mean kernel value between orbit a and orbit b."""
    from .kernels import kernel_eval

    orbits = config.orbits or [np.arange(config.n_points)]
    fmat = np.asarray(kernel_eval(kernel, config.tau()), dtype=float)
    k = len(orbits)
    m = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            m[a, b] = fmat[np.ix_(orbits[a], orbits[b])].mean()
    return m


def optimal_orbit_weights(config: WeightedConfiguration, kernel) -> WeightedConfiguration:
    """Minimize the energy over weights constant on each orbit.

    The orbit problem is a small quadratic program on the simplex; every
    support pattern is tried and the KKT solution with the least value kept.
    """
    orbits = config.orbits or [np.arange(config.n_points)]
    m = orbit_matrix(config, kernel)
    k = len(orbits)
    best, best_val = None, math.inf
    for size in range(1, k + 1):
        for support in itertools.combinations(range(k), size):
            s = list(support)
            sub = m[np.ix_(s, s)]
            kkt = np.zeros((size + 1, size + 1))
            kkt[:size, :size] = 2 * sub
            kkt[:size, size] = -1.0
            kkt[size, :size] = 1.0
            rhs = np.zeros(size + 1)
            rhs[size] = 1.0
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                continue
            wts = sol[:size]
            if np.any(wts < -1e-14):
                continue
            full = np.zeros(k)
            full[s] = np.clip(wts, 0.0, None)
            full /= full.sum()
            val = full @ m @ full
            if val < best_val:
                best, best_val = full, val
    w = np.zeros(config.n_points)
    for a, orb in enumerate(orbits):
        w[orb] = best[a] / len(orb)
    return config.with_weights(w / w.sum())


# -- JSON ------------------------------------------------------------------------------

def config_to_json(config: WeightedConfiguration) -> dict:
    pts = config.points
    if config.space.field is Field.C:
        coords = [[[float(z.real), float(z.imag)] for z in row] for row in pts]
    elif config.space.field is Field.H:
        coords = [[[float(c) for c in q] for q in row] for row in pts]
    else:
        coords = [[float(x) for x in row] for row in pts]
    out = {"space": config.space.to_json(), "points": coords, "weights": [float(w) for w in config.weights]}
    if config.name:
        out["name"] = config.name
    return out


def config_from_json(obj: dict) -> WeightedConfiguration:
    """Read and validate a configuration (normalization is checked, not applied)."""
    try:
        space = SpaceDescriptor.from_json(obj["space"])
        raw = obj["points"]
        weights = np.asarray(obj["weights"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed configuration: {exc}") from exc
    if space.field is Field.C:
        arr = np.asarray(raw, dtype=float)
        if arr.ndim != 3 or arr.shape[-1] != 2:
            raise ConfigurationError("complex coordinates must be [re, im] pairs")
        pts = arr[..., 0] + 1j * arr[..., 1]
    elif space.field is Field.H:
        pts = np.asarray(raw, dtype=float)
        if pts.ndim != 3 or pts.shape[-1] != 4:
            raise ConfigurationError("quaternion coordinates must be 4-arrays")
    else:
        pts = np.asarray(raw, dtype=float)
        if pts.ndim != 2:
            raise ConfigurationError("real coordinates must be a list of vectors")
    nrm = norms(pts, space.field)
    if np.any(np.abs(nrm - 1.0) > 1e-10):
        raise ConfigurationError("points must be unit vectors")
    return WeightedConfiguration(space, pts, weights, name=str(obj.get("name", "")))
