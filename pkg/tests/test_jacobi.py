"""Jacobi polynomials: normalization, orthogonality, positive semidefinite Gram matrices."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from pframe import jacobi
from pframe.configurations import WeightedConfiguration
from pframe.jacobi import Definiteness, InvalidParameters
from pframe.spaces import SpaceDescriptor, random_points, tau_matrix

PARAMS = [(Fraction(1, 2), Fraction(-1, 2)), (Fraction(0), Fraction(0)), (Fraction(-1, 2), Fraction(-1, 2)),
          (Fraction(3, 2), Fraction(1, 2)), (Fraction(2), Fraction(0)), (Fraction(3), Fraction(3))]

SPACES = ["s:3", "rp:3", "rp:5", "cp:3", "hp:2", "s:5", "cp:4"]


@pytest.mark.parametrize("ab", PARAMS)
def test_normalized_at_one(ab):
    vals = jacobi.jacobi_eval_all(*ab, 8, np.array([1.0]))
    assert np.allclose(vals[:, 0], 1.0, atol=1e-13)


@pytest.mark.parametrize("ab", PARAMS)
def test_matches_scipy_up_to_scale(ab):
    # independent oracle: scipy's classical Jacobi polynomial, rescaled to 1 at t = 1
    a, b = map(float, ab)
    t = np.linspace(-0.95, 0.95, 11)
    ours = jacobi.jacobi_eval_all(*ab, 7, t)
    for n in range(8):
        ref = special.eval_jacobi(n, a, b, t) / special.eval_jacobi(n, a, b, 1.0)
        assert np.allclose(ours[n], ref, atol=1e-12)


@pytest.mark.parametrize("ab", PARAMS[:4])
def test_orthogonality_by_adaptive_quadrature(ab):
    a, b = map(float, ab)
    w = lambda t: (1 - t) ** a * (1 + t) ** b
    for m in range(5):
        for n in range(m, 5):
            f = lambda t: w(t) * jacobi.jacobi_eval(*ab, m, t) * jacobi.jacobi_eval(*ab, n, t)
            val, _ = integrate.quad(f, -1, 1, limit=200)
            if m != n:
                assert abs(val) < 1e-8
            else:
                assert val > 0


@pytest.mark.parametrize("ab", PARAMS)
def test_gauss_jacobi_integrates_orthogonality_exactly(ab):
    x, w = jacobi.gauss_jacobi(*ab, 12)
    T = jacobi.jacobi_eval_all(*ab, 10, x)
    M = (T * w) @ T.T
    off = M - np.diag(np.diag(M))
    assert np.max(np.abs(off)) < 1e-12
    ns = [float(jacobi.norm_sq(*ab, n)) for n in range(11)]
    assert np.allclose(np.diag(M), ns, rtol=1e-11)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=50), min_size=1, max_size=9),
       st.sampled_from(PARAMS))
def test_power_jacobi_roundtrip_exact(coeffs, ab):
    back = jacobi.jacobi_to_power(jacobi.power_to_jacobi(coeffs, *ab), *ab)
    back = back + [Fraction(0)] * (len(coeffs) - len(back))
    assert back[: len(coeffs)] == coeffs


@given(st.sampled_from(SPACES), st.integers(min_value=2, max_value=25), st.integers(min_value=0, max_value=8),
       st.integers(min_value=0, max_value=2**32 - 1))
def test_gram_matrix_psd(space_text, n_pts, degree, seed):
    space = SpaceDescriptor.parse(space_text)
    pts = random_points(space, n_pts, np.random.default_rng(seed))
    T = np.clip(tau_matrix(pts, space), -1.0, 1.0)
    G = jacobi.jacobi_eval_all(space.alpha, space.beta, degree, T.ravel())[degree].reshape(T.shape)
    assert np.linalg.eigvalsh((G + G.T) / 2).min() >= -1e-9 * n_pts


def test_monic_power_coefficients():
    # C_1 for (alpha, beta) has root (beta - alpha)/(alpha + beta + 2)
    a, b = Fraction(1, 2), Fraction(-1, 2)
    p = jacobi.jacobi_monic(a, b, 1)
    assert p == [-(b - a) / (a + b + 2), 1]


def test_positive_definite_sign_test():
    assert jacobi.is_positive_definite([1.0, 0.5, 0.0]) == Definiteness.YES
    assert jacobi.is_positive_definite([1.0, -0.5]) == Definiteness.NO
    assert jacobi.is_positive_definite([1.0, -1e-12]) == Definiteness.MARGINAL


def test_invalid_parameters():
    with pytest.raises(InvalidParameters):
        jacobi.jacobi_eval(-1, 0, 2, 0.3)
