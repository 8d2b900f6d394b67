from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from pframe.hermite import (
    NodeSystem,
    PreconditionError,
    hermite_interpolant,
    remainder_nonneg,
    sweep_nonneg,
    taylor_sweep,
)
from pframe.interval import Interval, poly_eval
from pframe.kernels import PFrame

T = sympy.Symbol("t")


def _sympy_hermite(f, pairs):
    """Oracle: solve the confluent Vandermonde system symbolically."""
    D = sum(k for _, k in pairs)
    cs = sympy.symbols(f"c0:{D}")
    H = sum(c * T**i for i, c in enumerate(cs))
    eqs = []
    for s, k in pairs:
        for j in range(k):
            eqs.append(sympy.Eq(sympy.diff(H, T, j).subs(T, s), sympy.diff(f, T, j).subs(T, s)))
    sol = sympy.solve(eqs, cs, dict=True)[0]
    return [float(sympy.N(sol[c], 30)) for c in cs]


@pytest.mark.parametrize("p,pairs", [
    (3, [("-3/5", 2), ("1", 1)]),
    (5, [("-1/3", 2), ("1/3", 2), ("1", 1)]),
    (Fraction(5, 2), [("-1", 1), ("0", 2), ("1", 1)]),
])
def test_interpolant_matches_symbolic_oracle(p, pairs):
    f = ((1 + T) / 2) ** (sympy.Rational(p) / 2)
    ref = _sympy_hermite(f, [(sympy.Rational(s), k) for s, k in pairs])
    nodes = NodeSystem.from_multiplicities(pairs)
    got = hermite_interpolant(PFrame(float(p)), nodes, "float")
    assert np.allclose(got, ref, atol=1e-11)
    enc = hermite_interpolant(PFrame(float(p)), nodes, "interval")
    for c, r in zip(enc, ref):
        assert c.lo - 1e-15 <= r <= c.hi + 1e-15


def test_exact_mode_for_polynomial_kernel():
    nodes = NodeSystem.from_multiplicities([("-1/2", 2), ("1", 1)])
    H = hermite_interpolant(PFrame(4), nodes, "exact")
    assert all(isinstance(c, Fraction) for c in H)
    # degree 2 interpolant of a quadratic is the quadratic itself
    assert H == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=20), min_size=1, max_size=5),
       st.fractions(min_value=Fraction(1, 1000), max_value=1, max_denominator=1000))
def test_sweep_certifies_positive_polynomials(roots, margin):
    # (t - r)^2 products plus a positive margin are positive everywhere
    poly = np.array([float(margin)])
    for r in roots:
        poly = np.convolve(poly, [float(r) ** 2, -2 * float(r), 1.0])
    poly[0] += float(margin)
    h = [Interval.point(-c) for c in poly]  # f - h = 0 - (-poly) = poly
    res = sweep_nonneg(lambda x, k: Interval(0.0, 0.0), h, depth_cap=40)
    assert res.status == "certified"


def test_sweep_detects_negative_dip():
    # t^2 - 1e-6 dips below zero near 0
    res = sweep_nonneg(lambda x, k: Interval(0.0, 0.0), [Interval.point(1e-6), Interval.point(0.0), Interval.point(-1.0)])
    assert res.status == "violated"


def test_taylor_sweep_with_contact():
    # (t - 1/2)^2 touches zero at 1/2; the contact hint lets the sweep close
    half = Interval.point(0.5)

    def fn(x, k):
        if k == 0:
            return (x - half) ** 2
        if k == 1:
            return 2 * (x - half)
        if k == 2:
            return Interval(2.0, 2.0)
        return Interval(0.0, 0.0)

    res = taylor_sweep([fn], contacts=[(half, 2)], exact_contact=True)
    assert res.status == "certified"


def test_remainder_sign_for_icosahedron_nodes():
    nodes = NodeSystem.from_multiplicities([("-3/5", 2), ("1", 1)])
    v = remainder_nonneg(PFrame(3), nodes)
    assert v.verdict == "yes" and v.analytic == "yes"


def test_remainder_requires_nonpositive_annihilator():
    with pytest.raises(PreconditionError):
        remainder_nonneg(PFrame(3), NodeSystem.from_multiplicities([("0", 1), ("1", 1)]))


def test_nodes_outside_interval_rejected():
    with pytest.raises(PreconditionError):
        NodeSystem(("2",))
