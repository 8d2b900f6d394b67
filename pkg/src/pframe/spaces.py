"""Field arithmetic, space descriptors, inner products and the cosine coordinate tau.

Points are numpy arrays: real vectors have shape ``(d,)``, complex vectors are
complex arrays of shape ``(d,)`` and quaternionic vectors have shape ``(d, 4)``
holding the (1, i, j, k) components of each coordinate. Point sets stack these
along a leading axis.

Quaternionic lines are right-multiplication lines ``x H``; the inner product
``<x, y> = sum(conj(y_i) x_i)`` is used so that ``|<x lam, y mu>| = |<x, y>|``
for unit quaternions ``lam, mu`` and left-acting symplectic matrices preserve it.
For commutative fields this is the usual ``sum(x_i conj(y_i))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class Field(enum.Enum):
    R = "R"
    C = "C"
    H = "H"
    O = "O"

    @property
    def real_dim(self) -> int:
        return {"R": 1, "C": 2, "H": 4, "O": 8}[self.value]

    @classmethod
    def parse(cls, name) -> "Field":
        if isinstance(name, Field):
            return name
        key = str(name).strip().upper()
        aliases = {"REAL": "R", "COMPLEX": "C", "QUATERNION": "H", "OCTONION": "O"}
        return cls(aliases.get(key, key))


class Kind(enum.Enum):
    SPHERE = "sphere"
    PROJECTIVE = "projective"

    @classmethod
    def parse(cls, name) -> "Kind":
        if isinstance(name, Kind):
            return name
        return cls(str(name).strip().lower())


class UnsupportedSpace(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def space_params(field, d: int, kind) -> tuple[Fraction, Fraction]:
    """Jacobi parameters (alpha, beta) of a two-point homogeneous space."""
    field, kind = Field.parse(field), Kind.parse(kind)
    if field is Field.O:
        raise UnsupportedSpace("octonionic spaces are not supported")
    if d < 2:
        raise UnsupportedSpace(f"dimension must be at least 2, got {d}")
    if kind is Kind.PROJECTIVE and field is Field.R and d == 2:
        raise UnsupportedSpace("RP^1 is the circle; use the sphere S^1 instead")
    if kind is Kind.SPHERE:
        # S^{d-1} inside R^{d * dim_R F}
        n = d * field.real_dim
        a = Fraction(n - 3, 2)
        return a, a
    alpha = Fraction((d - 1) * field.real_dim, 2) - 1
    beta = Fraction(field.real_dim, 2) - 1
    return alpha, beta


@dataclass(frozen=True)
class SpaceDescriptor:
    field: Field
    d: int
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "field", Field.parse(self.field))
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        space_params(self.field, self.d, self.kind)

    @property
    def alpha(self) -> Fraction:
        return space_params(self.field, self.d, self.kind)[0]

    @property
    def beta(self) -> Fraction:
        return space_params(self.field, self.d, self.kind)[1]

    @property
    def params(self) -> tuple[Fraction, Fraction]:
        return space_params(self.field, self.d, self.kind)

    @property
    def is_projective(self) -> bool:
        return self.kind is Kind.PROJECTIVE

    def label(self) -> str:
        if self.kind is Kind.SPHERE:
            suffix = "" if self.field is Field.R else f"_{self.field.value}"
            return f"S^{self.d - 1}{suffix}"
        return f"{self.field.value}P^{self.d - 1}"

    def to_json(self) -> dict:
        return {"field": self.field.value, "d": self.d, "kind": self.kind.value}

    @classmethod
    def from_json(cls, obj: dict) -> "SpaceDescriptor":
        return cls(Field.parse(obj["field"]), int(obj["d"]), Kind.parse(obj["kind"]))

    @classmethod
    def parse(cls, text: str) -> "SpaceDescriptor":
        """Parse compact labels such as ``rp:3``, ``cp:5``, ``hp:3``, ``s:3``."""
        head, _, dim = text.partition(":")
        head = head.strip().lower()
        d = int(dim)
        table = {
            "rp": (Field.R, Kind.PROJECTIVE),
            "cp": (Field.C, Kind.PROJECTIVE),
            "hp": (Field.H, Kind.PROJECTIVE),
            "s": (Field.R, Kind.SPHERE),
            "sphere": (Field.R, Kind.SPHERE),
        }
        if head not in table:
            raise ValueError(f"unknown space label {text!r}")
        field, kind = table[head]
        return cls(field, d, kind)


# -- quaternions ------------------------------------------------------------

def qmul(a, b):
    """Hamilton product of quaternion arrays (last axis of length 4)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a):
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(a):
    return np.sqrt(np.sum(np.asarray(a, dtype=float) ** 2, axis=-1))


def _left_matrix(q):
    """Real 4x4 matrices L(q) with L(q) @ p == qmul(q, p)."""
    q0, q1, q2, q3 = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    rows = [
        [q0, -q1, -q2, -q3],
        [q1, q0, -q3, q2],
        [q2, q3, q0, -q1],
        [q3, -q2, q1, q0],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


# -- vectors -----------------------------------------------------------------

def _as_array(x, field: Field) -> np.ndarray:
    if field is Field.C:
        return np.asarray(x, dtype=complex)
    if field is Field.H:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != 4:
            raise DimensionMismatch("quaternionic coordinates need 4 components")
        return arr
    if field is Field.R:
        arr = np.asarray(x)
        if np.iscomplexobj(arr):
            raise DimensionMismatch("complex data given for a real space")
        return arr.astype(float)
    raise UnsupportedSpace("octonionic vectors are not supported")


def vector_dim(x, field) -> int:
    arr = _as_array(x, Field.parse(field))
    return arr.shape[-2] if Field.parse(field) is Field.H else arr.shape[-1]


def norms(points, field) -> np.ndarray:
    field = Field.parse(field)
    arr = _as_array(points, field)
    if field is Field.H:
        return np.sqrt(np.sum(arr**2, axis=(-1, -2)))
    return np.sqrt(np.sum(np.abs(arr) ** 2, axis=-1))


def unit_vector(coords, field) -> np.ndarray:
    """Normalize coordinates to a unit vector of the given field."""
    field = Field.parse(field)
    arr = _as_array(coords, field)
    n = norms(arr, field)
    if np.any(n == 0):
        raise ValueError("cannot normalize the zero vector")
    if field is Field.H:
        return arr / n[..., None, None]
    return arr / n[..., None]


def normalize_rows(points, field) -> np.ndarray:
    return unit_vector(points, field)


def inner_product(x, y, field=None):
    """<x, y>; returns a float, a complex number or a length-4 quaternion array."""
    if field is None:
        field = _guess_field(x)
    field = Field.parse(field)
    x = _as_array(x, field)
    y = _as_array(y, field)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")
    if field is Field.H:
        return np.sum(qmul(qconj(y), x), axis=-2)
    if field is Field.C:
        return complex(np.sum(x * np.conj(y)))
    return float(np.dot(x, y))


def _guess_field(x) -> Field:
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        return Field.C
    if arr.ndim >= 2 and arr.shape[-1] == 4:
        return Field.H
    return Field.R


def gram(points, field) -> np.ndarray:
    """Gram matrix [<x_i, x_j>]; quaternionic Gram has a trailing axis of 4."""
    field = Field.parse(field)
    pts = _as_array(points, field)
    if field is Field.H:
        left = _left_matrix(qconj(pts))  # (N, d, 4, 4)
        # G[a, b] = sum_i conj(y_b,i) x_a,i
        return np.einsum("bijk,aik->abj", left, pts)
    if field is Field.C:
        return pts @ pts.conj().T
    return pts @ pts.T


def abs_gram(points, field) -> np.ndarray:
    """Matrix of |<x_i, x_j>|."""
    field = Field.parse(field)
    g = gram(points, field)
    if field is Field.H:
        return np.sqrt(np.sum(g**2, axis=-1))
    return np.abs(g)


def real_gram(points, field) -> np.ndarray:
    """Matrix of Re <x_i, x_j>, the sphere cosine."""
    field = Field.parse(field)
    g = gram(points, field)
    if field is Field.H:
        return g[..., 0]
    return np.real(g)


def tau_matrix(points, space: SpaceDescriptor) -> np.ndarray:
    """All pairwise tau values, clamped into [-1, 1]."""
    if space.is_projective:
        a = abs_gram(points, space.field)
        t = 2.0 * a * a - 1.0
    else:
        t = real_gram(points, space.field)
    return np.clip(t, -1.0, 1.0)


def tau(x, y, space: SpaceDescriptor) -> float:
    """Cosine of the geodesic distance between two points of the space."""
    ip = inner_product(x, y, space.field)
    if space.is_projective:
        if space.field is Field.H:
            m2 = float(np.sum(np.asarray(ip) ** 2))
        else:
            m2 = abs(ip) ** 2
        t = 2.0 * m2 - 1.0
    else:
        t = float(np.asarray(ip)[0]) if space.field is Field.H else float(np.real(ip))
    return min(1.0, max(-1.0, t))


def tau_exact(abs_inner):
    """Exact tau = 2|<x,y>|^2 - 1 from an exact (sympy or rational) modulus."""
    import sympy

    v = sympy.nsimplify(abs_inner) if not isinstance(abs_inner, sympy.Basic) else abs_inner
    return sympy.simplify(2 * v**2 - 1)


def chordal_distance(t) -> float:
    """Chordal distance rho recovered from tau."""
    return float(np.sqrt(max(0.0, (1.0 - t) / 2.0)))


def random_points(space: SpaceDescriptor, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vectors (Gaussian direction sampling)."""
    d = space.d
    if space.field is Field.R:
        x = rng.standard_normal((n, d))
    elif space.field is Field.C:
        x = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    elif space.field is Field.H:
        x = rng.standard_normal((n, d, 4))
    else:
        raise UnsupportedSpace("octonionic spaces are not supported")
    return unit_vector(x, space.field)


def random_unit_scalars(field, n: int, rng: np.random.Generator):
    field = Field.parse(field)
    if field is Field.R:
        return rng.choice([-1.0, 1.0], size=n)
    if field is Field.C:
        return np.exp(2j * np.pi * rng.random(n))
    q = rng.standard_normal((n, 4))
    return q / qabs(q)[:, None]


def scale_points(points, scalars, field):
    """Right-multiply each point by its unit scalar (x -> x lam)."""
    field = Field.parse(field)
    pts = _as_array(points, field)
    if field is Field.H:
        lam = np.asarray(scalars, dtype=float)[:, None, :]
        return qmul(pts, np.broadcast_to(lam, pts.shape))
    return pts * np.asarray(scalars)[:, None]


def random_isometry(field, d: int, rng: np.random.Generator):
    """Haar-ish orthogonal / unitary / symplectic matrix acting on the left."""
    field = Field.parse(field)
    if field is Field.R:
        q, r = np.linalg.qr(rng.standard_normal((d, d)))
        return q * np.sign(np.diag(r))
    if field is Field.C:
        z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))
    # symplectic: Gram-Schmidt on quaternionic columns, returned as (d, d, 4)
    cols = []
    for _ in range(d):
        v = rng.standard_normal((d, 4))
        for c in cols:
            coef = np.sum(qmul(qconj(c), v), axis=0)  # <v, c> with our convention
            v = v - qmul(c, np.broadcast_to(coef, v.shape))
        v = v / np.sqrt(np.sum(v**2))
        cols.append(v)
    return np.stack(cols, axis=1)  # U[i, j] = cols[j][i]


def apply_isometry(matrix, points, field):
    field = Field.parse(field)
    pts = _as_array(points, field)
    if field is Field.H:
        u = np.asarray(matrix, dtype=float)  # (d, d, 4)
        # (U x)_i = sum_j U_ij x_j
        out = np.zeros_like(pts)
        for i in range(u.shape[0]):
            out[:, i, :] = np.sum(qmul(np.broadcast_to(u[i], pts.shape), pts), axis=1)
        return out
    return pts @ np.asarray(matrix).T
