import math

import numpy as np
import pytest
import sympy

from pframe.configurations import (
    CATALOG,
    ConfigurationError,
    WeightedConfiguration,
    abs_inner_census,
    catalog_get,
    code85_parts,
    config_from_json,
    config_to_json,
    design_strength,
    distance_set,
    optimal_orbit_weights,
    tightness_check,
)
from pframe.energy import energy_value
from pframe.kernels import PFrame
from pframe.spaces import SpaceDescriptor

CONSTRUCTIBLE = [n for n, e in CATALOG.items() if e.constructible]


@pytest.mark.parametrize("name", CONSTRUCTIBLE)
def test_catalog_parameters(name):
    entry = CATALOG[name]
    cfg = catalog_get(name)
    assert cfg.n_points == entry.n_lines
    assert design_strength(cfg).strength == entry.strength
    got = sorted({round(float(k), 8) for k in abs_inner_census(cfg.points, field=cfg.space.field) if float(k) < 1 - 1e-9})
    assert got == sorted(round(float(sympy.sympify(a)), 8) for a in entry.abs_inner)


@pytest.mark.parametrize("name,t", [("icosahedron", 2), ("e8-roots", 3), ("kissing-e8", 2), ("sic-3", 2), ("orthobasis-4", 1)])
def test_tight_designs(name, t):
    rep = tightness_check(catalog_get(name))
    assert rep.status == "tight" and rep.strength == t


@pytest.mark.parametrize("name", ["24-cell", "600-cell", "85-code"])
def test_non_tight_designs(name):
    assert tightness_check(catalog_get(name)).status == "not_tight"


def test_code85_census_and_sixth_moment():
    x1, x2, _ = code85_parts()
    assert abs_inner_census(x1) == {k: v for k, v in abs_inner_census(x1).items()}
    c12 = {round(float(k), 9): v for k, v in abs_inner_census(x1, x2).items()}
    assert c12 == {0.0: 720, round(1 / math.sqrt(3), 9): 1080}
    cfg = catalog_get("85-code")
    six = float(cfg.weights @ (((cfg.tau() + 1) / 2) ** 3) @ cfg.weights)
    assert abs(six - 1 / 35) < 1e-12


def test_json_roundtrip():
    for name in ("icosahedron", "sic-3", "85-code"):
        cfg = catalog_get(name)
        back = config_from_json(config_to_json(cfg))
        assert np.allclose(back.weights, cfg.weights)
        assert np.allclose(back.tau(), cfg.tau(), atol=1e-14)


def test_optimal_orbit_weights_do_not_increase_energy():
    for name, p in (("24-cell", 5), ("stroud-41", 5), ("e6-e6dual", 5)):
        cfg = catalog_get(name)
        k = PFrame(p)
        opt = optimal_orbit_weights(cfg, k)
        assert energy_value(opt, k) <= energy_value(cfg, k) + 1e-15


def test_distance_set_counts():
    ds = distance_set(catalog_get("icosahedron"))
    assert dict(zip(np.round(ds.values, 12), ds.counts)) == {-0.6: 30, 1.0: 6}


def test_weight_validation():
    space = SpaceDescriptor.parse("rp:3")
    with pytest.raises(ConfigurationError):
        WeightedConfiguration(space, np.eye(3), np.array([0.5, 0.5, 0.5]))
    with pytest.raises(ConfigurationError):
        WeightedConfiguration(space, np.eye(3), np.array([1.5, -0.5, 0.0]))
    with pytest.raises(ConfigurationError):
        WeightedConfiguration(space, np.eye(4), np.full(4, 0.25))


def test_unknown_and_metadata_only_entries():
    with pytest.raises(KeyError):
        catalog_get("no-such-design")
    with pytest.raises(KeyError):
        catalog_get("leech-roots")
