from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from pframe.kernels import (
    Causal,
    PFrame,
    causal_quadratic,
    even_p_minimum,
    kernel_eval,
    kernel_expansion,
    pframe_eval,
    sic_energy,
)
from pframe.spaces import SpaceDescriptor


@given(st.floats(min_value=0.1, max_value=12), st.floats(min_value=-1, max_value=1))
def test_pframe_kernel_formula(p, t):
    assert np.isclose(pframe_eval(p, t), ((1 + t) / 2) ** (p / 2), rtol=1e-13, atol=1e-300)


@given(st.floats(min_value=0.5, max_value=9), st.floats(min_value=-0.9, max_value=0.9), st.integers(1, 3))
def test_pframe_derivatives_by_finite_difference(p, t, k):
    h = 1e-5
    lo, hi = pframe_eval(p, t - h, k - 1), pframe_eval(p, t + h, k - 1)
    assert np.isclose(pframe_eval(p, t, k), (hi - lo) / (2 * h), rtol=1e-5, atol=1e-8)


def test_causal_kernel_clipped_at_zero():
    k = Causal("2")
    t = np.linspace(-1, 1, 101)
    q = causal_quadratic(k, t)
    assert np.allclose(kernel_eval(k, t), np.maximum(q, 0))
    assert np.isclose(kernel_eval(k, 1.0), 16.0)
    assert np.isclose(kernel_eval(Causal("2", normalized=True), 1.0), 1.0)


def test_sic_energy_matches_closed_form():
    # SIC: d^2 equal-weight lines, |<>|^2 = 1/(d+1) off the diagonal, p = 3
    for d in range(2, 7):
        n = d * d
        expected = (1 + (n - 1) * (1 / (d + 1)) ** 1.5) / n
        assert np.isclose(sic_energy(d), expected, rtol=1e-14)
    assert np.isclose(sic_energy(3), 2 / 9, atol=1e-15)


def test_even_p_minimum_is_uniform_moment():
    # E|<x,e>|^{2k} over the unit sphere of R^d is (2k-1)!! / (d (d+2) ... (d+2k-2))
    assert even_p_minimum("R", 3, 1) == Fraction(1, 3)
    assert even_p_minimum("R", 3, 2) == Fraction(1, 5)
    assert even_p_minimum("C", 3, 1) == Fraction(1, 3)
    assert even_p_minimum("C", 3, 2) == Fraction(1, 6)


@pytest.mark.parametrize("p", [3, 5, 2.5])
def test_expansion_mean_matches_quadrature(p):
    space = SpaceDescriptor.parse("rp:3")
    a, b = map(float, space.params)
    exp = kernel_expansion(PFrame(p), space.alpha, space.beta, 12)
    w = lambda t: (1 - t) ** a * (1 + t) ** b
    num, _ = integrate.quad(lambda t: w(t) * pframe_eval(p, t), -1, 1, limit=200)
    den, _ = integrate.quad(w, -1, 1, limit=200)
    assert np.isclose(float(exp.floats()[0]), num / den, rtol=1e-10)


def test_pframe_rejects_nonpositive_p():
    with pytest.raises(ValueError):
        PFrame(0)
