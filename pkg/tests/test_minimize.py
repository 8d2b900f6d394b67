import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pframe.configurations import WeightedConfiguration, catalog_get
from pframe.kernels import Causal, PFrame
from pframe.minimize import (
    MinimizeOptions,
    canonicalize_support,
    compare_to_catalog,
    energy_and_matrix,
    minimize_energy,
    multistart,
    point_direction,
    project_simplex,
)
from pframe.spaces import Field, SpaceDescriptor, random_points, unit_vector

vectors = st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=30).map(np.array)


@given(vectors)
def test_project_simplex_invariants(v):
    w = project_simplex(v)
    assert np.all(w >= 0)
    assert abs(w.sum() - 1) < 1e-12
    assert np.allclose(project_simplex(w), w, atol=1e-12)
    # optimality: no simplex vertex is closer to v than the projection by more than rounding
    d = np.linalg.norm(v - w)
    for i in range(len(v)):
        e = np.zeros(len(v))
        e[i] = 1.0
        assert d <= np.linalg.norm(v - e) + 1e-9


@pytest.mark.parametrize("text", ["rp:3", "cp:3", "hp:2", "s:3"])
def test_gradient_matches_finite_differences(text):
    space = SpaceDescriptor.parse(text)
    rng = np.random.default_rng(7)
    kernel = PFrame(3.3) if space.is_projective else Causal("2", normalized=True)
    n = 5
    X = random_points(space, n, rng)
    w = rng.dirichlet(np.ones(n))
    E, T, _ = energy_and_matrix(X, w, space, kernel)
    P = point_direction(X, w, space, kernel, T) * w.reshape((n,) + (1,) * (X.ndim - 1))
    V = rng.standard_normal(X.shape) + (1j * rng.standard_normal(X.shape) if space.field is Field.C else 0)
    h = 1e-6
    Ep = energy_and_matrix(unit_vector(X + h * V, space.field), w, space, kernel)[0]
    Em = energy_and_matrix(unit_vector(X - h * V, space.field), w, space, kernel)[0]
    fd = (Ep - Em) / (2 * h)
    # tangent part of V is what moves the energy
    inner = np.real(np.sum(P * np.conj(V)))
    assert abs(fd - inner) < 1e-6 * (1 + abs(fd))


@given(st.integers(0, 2**32 - 1))
def test_trace_nonincreasing_and_weights_on_simplex(seed):
    space = SpaceDescriptor.parse("rp:3")
    st_ = minimize_energy(space, PFrame(3), 8, seed, MinimizeOptions(max_iter=150))
    tr = np.array(st_.trace)
    assert np.all(np.diff(tr) <= 1e-15)
    w = st_.config.weights
    assert np.all(w >= 0) and abs(w.sum() - 1) < 1e-12


def test_rp2_p3_reaches_icosahedron():
    runs = multistart(SpaceDescriptor.parse("rp:3"), PFrame(3), 20, 4, seed=1)
    best = min(runs, key=lambda r: r.energy)
    assert abs(best.energy - 0.241202265916660) < 1e-6
    can = canonicalize_support(best)
    assert can.n_points == 6
    assert compare_to_catalog(can, PFrame(3)).match == "icosahedron"


def test_multistart_independent_of_threads():
    space = SpaceDescriptor.parse("rp:3")
    opts = MinimizeOptions(max_iter=50)
    a = multistart(space, PFrame(3), 6, 3, seed=5, opts=opts, threads=1)
    b = multistart(space, PFrame(3), 6, 3, seed=5, opts=opts, threads=3)
    assert [r.energy for r in a] == [r.energy for r in b]


def test_canonicalize_merges_and_drops():
    space = SpaceDescriptor.parse("rp:3")
    e = np.eye(3)
    near = unit_vector(e[0] + np.array([0, 1e-6, 0]), Field.R)
    pts = np.vstack([e, near, -e[1], e[2] + 0.3])  # -e1 is the same line as e1
    w = np.array([0.2, 0.2, 0.3, 0.15, 0.15, 0.0])
    cfg = canonicalize_support(WeightedConfiguration(space, pts, w))
    assert cfg.n_points == 3
    assert np.allclose(sorted(cfg.weights), [0.3, 0.35, 0.35])


def test_canonicalize_keeps_orthobasis():
    cfg = catalog_get("orthobasis-4")
    assert canonicalize_support(cfg).n_points == 4


def test_causal_warns_about_kink():
    with pytest.warns(RuntimeWarning):
        minimize_energy(SpaceDescriptor.parse("s:3"), Causal("2"), 4, 0, MinimizeOptions(max_iter=5))


def test_invalid_size():
    with pytest.raises(ValueError):
        minimize_energy(SpaceDescriptor.parse("rp:3"), PFrame(3), 0)
