"""Acceptance suite: one test per criterion, with fixed tolerances and runtime budgets."""

import math
import time

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from hullbound.c2 import EXAMPLE_FAMILIES, KnotSpec, geometric_hull_witness, knot_degree_experiment, knot_p1
from hullbound.cheb import grid_hull, membership_numeric, verify_certificate
from hullbound.exact import PointConfiguration, hull_point_search, membership_exact
from hullbound.experiments import (PathologicalCurveSpec, arc_nonconvexity_witness, chebyshev_symmetry_check,
                                   jacobian_constant_check, pathological_membership, quadratic_arc_separation)
from hullbound.geometry import orthocenter
from hullbound.poly import eval2
from hullbound.sets import finite_set, resample, sample
from hullbound.verdict import MEMBER, NON_MEMBER

from conftest import roots


def test_01_equally_spaced_hull():
    t0 = time.perf_counter()
    for n in range(3, 9):
        z = roots(n + 1)
        v = membership_exact(PointConfiguration(z), 0)
        assert v.status == MEMBER and v.residual < 1e-10
        grid = grid_hull(finite_set(z), n, (-1.2, 1.2, -1.2, 1.2), 201)
        # a flag is a member verdict; borderline cells report numerical ambiguity
        flagged = np.array([complex(x, y) for x, y, _, s in grid.cells() if s == MEMBER])
        near = np.append(z, 0)
        dist = np.abs(near[None, :] - flagged[:, None]).min(axis=1)
        assert dist.max() <= 0.1, (n, dist.max())
        # the origin is a grid node and is flagged
        assert np.abs(flagged).min() < 1e-12
    assert time.perf_counter() - t0 < 120


def _triangle(rng, acute: bool):
    while True:
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        if orthocenter(*z).acute == acute:
            return z


def test_02_orthocenter():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    for _ in range(100):
        z = _triangle(rng, True)
        res = hull_point_search(PointConfiguration(z))
        assert res.w is not None and abs(res.w - orthocenter(*z).point) <= 1e-8
    for k in range(100):
        if k % 4 == 0:
            # right angle at z0, randomly placed and rotated
            a, s = complex(*rng.normal(size=2)), np.exp(1j * rng.uniform(0, 2 * np.pi))
            z = np.array([a, a + s * rng.uniform(0.5, 2), a + 1j * s * rng.uniform(0.5, 2)])
        else:
            z = _triangle(rng, False)
        assert hull_point_search(PointConfiguration(z)).w is None
    assert time.perf_counter() - t0 < 10


@pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (3, 2), (4, 3)])
def test_03_torus_knots(p, q):
    t0 = time.perf_counter()
    spec = KnotSpec(p, q)
    assert knot_degree_experiment(spec, p + q - 1, N=2000, L=128).value >= 0.999
    assert knot_degree_experiment(spec, p + q, N=2000, L=128).value <= 0.05
    assert time.perf_counter() - t0 < 180 / 4


def test_04_surface_families():
    t0 = time.perf_counter()
    first = {}
    for p, fam in EXAMPLE_FAMILIES.items():
        assert eval2(fam.F, *fam.base_point) == 0
        first[p] = geometric_hull_witness(fam, knot_p1(p))
    for p, fam in EXAMPLE_FAMILIES.items():
        assert abs(geometric_hull_witness(fam, knot_p1(p)) - first[p]) <= 1e-6
    assert time.perf_counter() - t0 < 5
    assert all(c >= 0.1 for c in first.values()), first


def test_05_jacobian_constancy():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    for n in range(2, 7):
        for _ in range(100):
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            det = jacobian_constant_check(z)
            assert abs(det - math.factorial(n)) <= 1e-6 * math.factorial(n)
    assert time.perf_counter() - t0 < 5


def _affine(rng, z):
    a = rng.uniform(0.3, 3) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return a * np.asarray(z) + complex(*rng.normal(size=2))


def _cross_oracle_case(rng, k):
    """Half the configurations carry a hull point as the query; the rest use random queries."""
    n = 3 + k % 5
    if k % 2 == 0:
        alpha = rng.uniform((n - 1) * math.pi / n + 0.05, math.pi - 0.01)
        W = arc_nonconvexity_witness(n, alpha, position=rng.uniform(0.1, 0.9))
        if W is not None:
            a = rng.uniform(0.3, 3) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            b = complex(*rng.normal(size=2))
            return n, a * W.config.array + b, a * W.w + b
    z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    while True:
        w = complex(*rng.uniform(-2.5, 2.5, size=2))
        if np.abs(z - w).min() > 1e-3:
            return n, z, w


def test_06_cross_oracle_agreement():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    compared = members = 0
    for k in range(500):
        n, z, w = _cross_oracle_case(rng, k)
        ex = membership_exact(PointConfiguration(z), w)
        rel = ex.diagnostics["relative_residual"]
        if 1e-9 <= rel <= 0.05:
            continue
        num = membership_numeric(finite_set(z), w, n)
        compared += 1
        if rel < 1e-9:
            members += 1
            assert num.status != NON_MEMBER, (k, rel, num.value)
        else:
            assert num.status != MEMBER, (k, rel, num.value)
        assert not num.verification_failed
    assert compared >= 400 and members >= 200
    assert time.perf_counter() - t0 < 300


def _random_instance(rng):
    kind = rng.integers(5)
    if kind == 0:
        K = sample(f"arc alpha={rng.uniform(0.3, 3.0):.6f} N=120")
    elif kind == 1:
        K = sample(f"circle N=120 r={rng.uniform(0.5, 2):.6f}")
    elif kind == 2:
        K = sample(f"segment N=60 x0=-1 y0={rng.uniform(-1, 1):.6f} x1=1 y1={rng.uniform(-1, 1):.6f}")
    elif kind == 3:
        K = sample("disk N=120")
    else:
        K = finite_set(rng.normal(size=12) + 1j * rng.normal(size=12))
    while True:
        w = complex(*rng.uniform(-2, 2, size=2))
        if np.abs(K.points - w).min() > 1e-2:
            return K, w


def test_07_degree_monotonicity_and_certificates():
    rng = np.random.default_rng(7)
    exit_two = certificates = 0
    for _ in range(200):
        K, w = _random_instance(rng)
        vals = []
        for d in range(1, 7):
            v = membership_numeric(K, w, d)
            vals.append(v.value)
            exit_two += v.verification_failed
            if v.certificate is not None:
                certificates += 1
                ok, info = verify_certificate(v.certificate, w, K, 10)
                assert ok
                # re-checked on the 10x resample (a finite set is its own resample)
                assert info["resample_size"] == len(resample(K, 10))
        assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:])), vals
    assert exit_two == 0
    assert certificates > 0


def test_08_quadratic_arc_separation():
    for alpha in (math.pi / 6, math.pi / 5, math.pi / 4.5):
        for r in (0.3, 0.6, 0.9):
            for phi in (0.0, alpha / 2, -alpha / 2):
                q = quadratic_arc_separation(alpha, r, phi)
                assert q.ratio > 1.005, (alpha, r, phi, q.ratio)


def test_09_pathological_curve():
    spec = PathologicalCurveSpec(6)
    for n in range(1, 7):
        v = pathological_membership(spec, n)
        assert v.status == MEMBER and v.residual < 1e-10
        assert v.diagnostics["degree"] == 2 * n + 1


def test_10_chebyshev_property():
    for n in range(2, 11):
        rep = chebyshev_symmetry_check(finite_set(roots(n + 1)), n)
        assert abs(rep.value - 1) <= 5e-3


def test_11_degree_one_is_convex_hull():
    rng = np.random.default_rng(11)
    res = 41
    for _ in range(20):
        m = int(rng.integers(4, 15))
        z = rng.normal(size=m) + 1j * rng.normal(size=m)
        pad = 0.5
        bbox = (z.real.min() - pad, z.real.max() + pad, z.imag.min() - pad, z.imag.max() + pad)
        grid = grid_hull(finite_set(z), 1, bbox, res)
        cell = math.hypot(grid.xs[1] - grid.xs[0], grid.ys[1] - grid.ys[0])
        hull = ConvexHull(np.c_[z.real, z.imag])
        for x, y, _, s in grid.cells():
            signed = float((hull.equations[:, :2] @ [x, y] + hull.equations[:, 2]).max())
            if abs(signed) <= cell:
                continue
            assert (s == MEMBER) == (signed < 0), (x, y, s, signed)
