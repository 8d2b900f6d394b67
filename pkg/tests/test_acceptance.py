"""Acceptance criteria 1-8, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` (lines on stdout).
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import pytest

from pframe.certify import build_tight_certificate, causal_certificate, certify_600cell_range, build_600cell_certificate
from pframe.configurations import catalog_get, optimal_orbit_weights
from pframe.energy import energy_value
from pframe.kernels import PFrame, sic_energy
from pframe.minimize import canonicalize_support, compare_to_catalog, multistart
from pframe.reproduce import census_85, complex_energies, lp_bounds, lp_comparison, real_energies
from pframe.spaces import SpaceDescriptor

RESULTS: dict[int, tuple[bool, str]] = {}

ICOSA_P3 = 0.241202265916660
CELL600_P9 = 0.047015486159502
PROPERTY_TESTS = [
    "tests/test_jacobi.py",
    "tests/test_interval.py",
    "tests/test_energy.py::test_isometry_and_phase_invariance",
    "tests/test_energy.py::test_permutation_invariance_and_range",
    "tests/test_certify.py::test_soundness_against_random_measures",
]


def _record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)


def criterion_1():
    spot = [("icosahedron", 3, ICOSA_P3, "design"), ("24-cell", 5, 0.096277507157493, "optimal"),
            ("600-cell", 9, CELL600_P9, "design"), ("e8-roots", 5, 0.022916666666667, "design"),
            ("kissing-e8", 3, 1 / 14, "design")]
    bad = []
    for name, p, value, weights in spot:
        cfg = catalog_get(name)
        if weights == "optimal":
            cfg = optimal_orbit_weights(cfg, PFrame(p))
        if abs(energy_value(cfg, PFrame(p)) - value) > 1e-12:
            bad.append(f"{name} p={p}")
    if abs(sic_energy(3) - 2 / 9) > 1e-12:
        bad.append("SIC d=3")
    cells = real_energies() + complex_energies()
    bad += [c.cell for c in cells if c.passed is False]
    checked = sum(c.passed is True for c in cells) + len(spot) + 1
    return not bad, f"{checked} energies checked, {sum(c.passed is None for c in cells)} skipped" + (f"; failing: {bad}" if bad else "")


def criterion_2():
    cells = census_85()
    bad = [c.cell for c in cells if not c.passed]
    return not bad, "sixth moment 1/35, census and strength 3" + (f"; failing: {bad}" if bad else "")


def criterion_3():
    cases = [("icosahedron", 2.5), ("icosahedron", 3), ("icosahedron", 3.5), ("e8-roots", 4.5), ("e8-roots", 5),
             ("e8-roots", 5.5), ("kissing-e8", 3), ("orthobasis-4", 1)]
    bad = []
    for name, p in cases:
        cfg = catalog_get(name)
        cert = build_tight_certificate(cfg, PFrame(p))
        checks = ("h_leq_f", "positive_definite", "interpolation_match", "design_strength_sufficient")
        ok = (cert.verdict == "verified" and all(cert.checks.get(k) == "pass" for k in checks)
              and abs(cert.bound.lo - energy_value(cfg, PFrame(p))) <= 1e-10)
        if not ok:
            bad.append(f"{name} p={p}")
    return not bad, f"{len(cases) - len(bad)}/{len(cases)} certificates verified" + (f"; failing: {bad}" if bad else "")


def criterion_4():
    rng = certify_600cell_range(8, 10)
    cert = build_600cell_certificate(9)
    gap = abs(cert.bound.lo - CELL600_P9)
    ok = rng.verdict == "verified" and cert.verdict == "verified" and gap <= 1e-10
    return ok, f"range [8, 10] {rng.verdict} over {len(rng.cells)} cells; p=9 bound {cert.bound.lo:.15f} (gap {gap:.1e})"


def criterion_5():
    cells = lp_bounds(8) + lp_comparison()
    bad = [c.cell for c in cells if not c.passed]
    return not bad, f"{len(cells) - len(bad)}/{len(cells)} LP cells" + (f"; failing: {bad}" if bad else "")


def criterion_6():
    cross = causal_certificate("cross_polytope")
    ico = causal_certificate("icosahedron")
    ok = cross.verdict == "verified" and ico.verdict == "verified" and abs(ico.bound.lo - 1 / 12) <= 1e-12
    return ok, f"cross-polytope {cross.verdict}, icosahedron {ico.verdict} with bound {ico.bound.lo!r}"


def criterion_7():
    rp2 = SpaceDescriptor.parse("rp:3")
    runs = multistart(rp2, PFrame(3), 20, 32, seed=2024)
    hits = sum(abs(r.energy - ICOSA_P3) <= 1e-6 and canonicalize_support(r).n_points == 6 for r in runs)
    rp3 = SpaceDescriptor.parse("rp:4")
    runs4 = multistart(rp3, PFrame(5), 40, 8, seed=2024)
    best = canonicalize_support(min(runs4, key=lambda r: r.energy))
    cmp = compare_to_catalog(best, PFrame(5))
    ok = hits >= 16 and cmp.match == "24-cell"
    return ok, f"RP^2: {hits}/32 starts reach the icosahedron; RP^3 best run matches {cmp.match}"


def criterion_8():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
                          cwd=root, capture_output=True, text=True)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    return proc.returncode == 0, tail


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
            7: criterion_7, 8: criterion_8}

NAMES = {1: "energy goldens", 2: "85-line code", 3: "tight certificates", 4: "600-cell range",
         5: "LP bounds", 6: "causal certificates", 7: "optimizer reproduction", 8: "property suites"}


def format_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n} ({NAMES[n]}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    t0 = time.time()
    ok, detail = CRITERIA[n]()
    _record(n, ok, f"{detail} [{time.time() - t0:.1f}s]")
    print(format_line(n))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        t0 = time.time()
        ok, detail = CRITERIA[n]()
        _record(n, ok, f"{detail} [{time.time() - t0:.1f}s]")
        print(format_line(n), flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
