import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pframe.configurations import WeightedConfiguration, catalog_get
from pframe.energy import energy, energy_value, kernel_matrix, uniform_measure_energy
from pframe.kernels import Causal, KernelMismatch, PFrame, Poly, SphericalPFrame
from pframe.spaces import SpaceDescriptor, apply_isometry, random_isometry, random_points, random_unit_scalars, scale_points

SPACES = ["rp:3", "rp:5", "cp:3", "hp:2", "s:3"]


def _random_measure(space, n, rng):
    return WeightedConfiguration(space, random_points(space, n, rng), rng.dirichlet(np.ones(n)))


@given(st.sampled_from(SPACES), st.integers(1, 15), st.floats(0.5, 9.0), st.integers(0, 2**32 - 1))
def test_isometry_and_phase_invariance(text, n, p, seed):
    space = SpaceDescriptor.parse(text)
    rng = np.random.default_rng(seed)
    cfg = _random_measure(space, n, rng)
    kernel = PFrame(p) if space.is_projective else Causal("2")
    e0 = energy_value(cfg, kernel)
    U = random_isometry(space.field, space.d, rng)
    moved = cfg.with_points(apply_isometry(U, cfg.points, space.field))
    assert math.isclose(energy_value(moved, kernel), e0, rel_tol=1e-11, abs_tol=1e-13)
    if space.is_projective:
        lam = random_unit_scalars(space.field, n, rng)
        scaled = cfg.with_points(scale_points(cfg.points, lam, space.field))
        assert math.isclose(energy_value(scaled, kernel), e0, rel_tol=1e-11, abs_tol=1e-13)


@given(st.sampled_from(SPACES[:4]), st.integers(1, 12), st.floats(0.5, 9.0), st.integers(0, 2**32 - 1))
def test_permutation_invariance_and_range(text, n, p, seed):
    space = SpaceDescriptor.parse(text)
    rng = np.random.default_rng(seed)
    cfg = _random_measure(space, n, rng)
    perm = rng.permutation(n)
    shuffled = WeightedConfiguration(space, cfg.points[perm], cfg.weights[perm])
    e = energy_value(cfg, PFrame(p))
    assert math.isclose(energy_value(shuffled, PFrame(p)), e, rel_tol=1e-13)
    # sum of w_i^2 <= E <= 1 because 0 <= f <= 1 and f(1) = 1
    assert float(cfg.weights @ cfg.weights) - 1e-14 <= e <= 1 + 1e-14


def test_unnormalized_input_points_are_rescaled():
    space = SpaceDescriptor.parse("rp:3")
    pts = np.array([[2.0, 0, 0], [0, 3.0, 0], [0, 0, 0.5]])
    cfg = WeightedConfiguration(space, pts, np.full(3, 1 / 3))
    assert math.isclose(energy_value(cfg, PFrame(1)), 1 / 3, rel_tol=1e-15)


@pytest.mark.parametrize("name,p,value", [
    ("icosahedron", 3, 0.241202265916660),
    ("e8-roots", 5, 0.022916666666667),
    ("kissing-e8", 3, 1 / 14),
    ("sic-3", 3, 2 / 9),
])
def test_energy_goldens(name, p, value):
    rep = energy(catalog_get(name), PFrame(p), target=value)
    assert rep.abs_error <= 1e-12


def test_design_integrates_polynomials_exactly():
    # icosahedron lines form a projective 2-design: quadratics in tau average exactly
    cfg = catalog_get("icosahedron")
    poly = Poly((0.3, -0.2, 0.7))
    assert math.isclose(energy_value(cfg, poly), uniform_measure_energy(poly, cfg.space), abs_tol=1e-14)


def test_uniform_energy_even_p():
    # the invariant measure on RP^2 has E|<x,y>|^2 = 1/3 and E|<x,y>|^4 = 1/5
    space = SpaceDescriptor.parse("rp:3")
    assert math.isclose(uniform_measure_energy(PFrame(2), space), 1 / 3, rel_tol=1e-12)
    assert math.isclose(uniform_measure_energy(PFrame(4), space), 1 / 5, rel_tol=1e-12)


def test_kernel_space_mismatch():
    with pytest.raises(KernelMismatch):
        kernel_matrix(catalog_get("icosahedron"), Causal("2"))
    with pytest.raises(KernelMismatch):
        kernel_matrix(catalog_get("icosahedron"), SphericalPFrame(3))
