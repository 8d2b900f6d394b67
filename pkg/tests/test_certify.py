import copy
import json
import math

import numpy as np
import pytest
from scipy import special

from pframe.certify import (
    CELL600_SPACE,
    Certificate,
    build_600cell_certificate,
    build_tight_certificate,
    causal_certificate,
    cell600_coefficients,
    certify_600cell_range,
    moment_certificate,
    verify_certificate,
)
from pframe.configurations import WeightedConfiguration, catalog_get
from pframe.energy import energy_value
from pframe.hermite import PreconditionError
from pframe.interval import Interval
from pframe.kernels import PFrame
from pframe.lpbound import lp_lower_bound
from pframe.spaces import SpaceDescriptor, random_points


@pytest.fixture(scope="module")
def certs():
    out = {
        "icosahedron p=3": build_tight_certificate(catalog_get("icosahedron"), PFrame(3)),
        "e8-roots p=5": build_tight_certificate(catalog_get("e8-roots"), PFrame(5)),
        "600-cell p=9": build_600cell_certificate(9),
        "causal icosahedron": causal_certificate("icosahedron"),
        "causal cross-polytope": causal_certificate("cross_polytope"),
        "lp rp:4 p=5": lp_lower_bound(SpaceDescriptor.parse("rp:4"), PFrame(5)),
    }
    for name, c in out.items():
        assert c.verdict == "verified", name
    return out


@pytest.mark.parametrize("name", ["icosahedron p=3", "e8-roots p=5", "600-cell p=9", "causal icosahedron",
                                  "causal cross-polytope", "lp rp:4 p=5"])
def test_soundness_against_random_measures(certs, name):
    # a verified lower bound holds for every probability measure; try 200 random ones
    cert = certs[name]
    rng = np.random.default_rng(abs(hash(name)) % 2**32)
    bound = cert.bound.lo
    worst = math.inf
    for _ in range(200):
        n = int(rng.integers(1, 40))
        pts = random_points(cert.space, n, rng)
        w = rng.dirichlet(np.full(n, 0.5))
        e = energy_value(WeightedConfiguration(cert.space, pts, w), cert.kernel)
        worst = min(worst, e)
    assert worst >= bound - 1e-12


def test_bounds_equal_configuration_energy(certs):
    for name, cfg, p in (("icosahedron p=3", "icosahedron", 3), ("e8-roots p=5", "e8-roots", 5),
                         ("600-cell p=9", "600-cell", 9)):
        e = energy_value(catalog_get(cfg), PFrame(p))
        assert abs(certs[name].bound.lo - e) < 1e-10


def test_perturbed_coefficient_is_falsified(certs):
    cert = copy.deepcopy(certs["600-cell p=9"])
    cert.h_jacobi[6] = Interval(-1e-3, -1e-3)
    out = verify_certificate(cert)
    assert out.checks["positive_definite"] == "fail"
    assert out.verdict == "falsified"


def test_raised_constant_term_is_falsified(certs):
    # pushing h above f at a contact breaks h <= f
    cert = copy.deepcopy(certs["icosahedron p=3"])
    cert.h_jacobi[0] = cert.h_jacobi[0] + 1e-6
    out = verify_certificate(cert)
    assert out.checks["h_leq_f"] == "fail"
    assert out.verdict == "falsified"


def test_json_roundtrip_reverifies(certs):
    for cert in certs.values():
        back = Certificate.from_json(json.loads(json.dumps(cert.to_json())))
        again = verify_certificate(back)
        assert again.verdict == "verified"
        assert again.bound.lo == cert.bound.lo


def _scipy_c(n, a, b, t):
    return special.eval_jacobi(n, a, b, t) / special.eval_jacobi(n, a, b, 1.0)


def _oracle_600cell(p):
    # independent float solve of the interpolation system with h_6 fixed at 0
    a, b = map(float, CELL600_SPACE.params)
    s5 = math.sqrt(5)
    conds = [(-1.0, 0), ((-s5 - 1) / 4, 0), ((-s5 - 1) / 4, 1), (-0.5, 0), (-0.5, 1),
             ((s5 - 1) / 4, 0), ((s5 - 1) / 4, 1), (1.0, 0)]
    cols = (0, 1, 2, 3, 4, 5, 7, 8)
    A = np.zeros((8, 8))
    rhs = np.zeros(8)
    for i, (t, k) in enumerate(conds):
        for j, n in enumerate(cols):
            if k == 0:
                A[i, j] = _scipy_c(n, a, b, t)
            else:
                # C_n' = (n + a + b + 1)/2 * P^{(a+1,b+1)}_{n-1} / P^{(a,b)}_n(1)
                A[i, j] = 0.0 if n == 0 else (n + a + b + 1) / 2 * special.eval_jacobi(n - 1, a + 1, b + 1, t) / special.eval_jacobi(n, a, b, 1.0)
        rhs[i] = ((1 + t) / 2) ** (p / 2) if k == 0 else (p / 4) * ((1 + t) / 2) ** (p / 2 - 1)
    sol = np.linalg.solve(A, rhs)
    return np.concatenate([sol[:6], [0.0], sol[6:]])


@pytest.mark.parametrize("p", np.linspace(8.0, 10.0, 25))
def test_600cell_coefficients_against_float_oracle(p):
    got = cell600_coefficients(float(p))
    ref = _oracle_600cell(float(p))
    assert got[6].lo == 0.0 and got[6].hi == 0.0
    for g, r in zip(got, ref):
        assert g.lo - 1e-9 <= r <= g.hi + 1e-9
        assert g.lo >= 0.0  # positive definite across the range


def test_600cell_degenerate_range():
    res = certify_600cell_range(9, 9, samples=1)
    assert res.verdict == "verified"


@pytest.mark.parametrize("lo,hi", [(10.5, 11), (7, 9), (9.5, 9)])
def test_600cell_range_preconditions(lo, hi):
    with pytest.raises(PreconditionError):
        certify_600cell_range(lo, hi)


def test_600cell_point_precondition():
    with pytest.raises(PreconditionError):
        build_600cell_certificate(7.5)


def test_causal_icosahedron_bound():
    cert = causal_certificate("icosahedron")
    assert abs(cert.bound.lo - 1 / 12) < 1e-12
    assert all(v == "pass" for v in cert.checks.values())


def test_causal_cross_polytope_bound():
    cert = causal_certificate("cross_polytope")
    assert cert.verdict == "verified"
    assert abs(cert.bound.lo - 8 / 3) < 1e-12


@pytest.mark.parametrize("name,value", [("icosahedron", 0.44), ("orthobasis-4", 0.4)])
def test_moment_certificates(name, value):
    cert = moment_certificate(catalog_get(name))
    assert cert.verdict == "verified" and cert.sense == "upper"
    assert abs(cert.claimed_bound - value) < 1e-10


def test_tight_certificate_rejects_non_tight_design():
    with pytest.raises(PreconditionError):
        build_tight_certificate(catalog_get("24-cell"), PFrame(5))
