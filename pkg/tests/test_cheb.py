import math

import numpy as np
import pytest

from hullbound.cheb import (MonicConstraint, PointConstraint, grid_hull, membership_numeric, membership_numeric_many,
                            minimax, minimax_many, polygon_modulus, verify_certificate)
from hullbound.exact import PointConfiguration, membership_exact
from hullbound.poly import Poly1, eval1, monomial_basis, sup_norm
from hullbound.sets import arc_set, finite_set, sample

from conftest import roots

SEC = 1 / math.cos(math.pi / 128)


def value(points, w, degree, L=128):
    return minimax(finite_set(points), monomial_basis(1, degree), PointConstraint(w), L).value


def test_minimax_examples():
    assert value(roots(3), 0, 2) == pytest.approx(1, abs=1e-9)
    assert value(roots(3), 0, 3) < 1e-9
    sol = minimax(finite_set([-1, 1]), monomial_basis(1, 1), PointConstraint(2))
    assert sol.value == pytest.approx(0.5, rel=1 - 1 / SEC)
    p = sol.polynomial
    assert abs(eval1(p, 2) - 1) < 1e-10
    mono = minimax(finite_set(roots(9)), monomial_basis(1, 8), MonicConstraint())
    assert 1 / SEC <= mono.value <= 1 + 1e-9
    assert abs(mono.coefficients[-1] - 1) < 1e-10


def test_brute_force_cube_roots(rng):
    # every P with P(0) = 1 and degree <= 2 has sup >= 1 on the cube roots
    for _ in range(2000):
        c1, c2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert sup_norm(Poly1([1, c1, c2]), finite_set(roots(3))) >= 1 - 1e-12


def test_solution_invariants(rng):
    for _ in range(10):
        z = rng.normal(size=6) + 1j * rng.normal(size=6)
        w = complex(*rng.normal(size=2))
        K = finite_set(z)
        sol = minimax(K, monomial_basis(1, 3), PointConstraint(w))
        p = sol.polynomial
        assert abs(eval1(p, w) - 1) < 1e-10
        s = sup_norm(p, K)
        assert sol.value <= s * (1 + 1e-9) and s <= sol.value * SEC * (1 + 1e-9)
        assert 0 <= sol.value <= 1 + 1e-12
        assert sol.active_points and sol.directions_used == 128


def test_degree_monotone_and_sample_monotone(rng):
    z = rng.normal(size=9) + 1j * rng.normal(size=9)
    w = 0.1 + 0.2j
    vals = [value(z, w, d) for d in range(1, 7)]
    assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))
    more = np.append(z, rng.normal(size=3) + 1j * rng.normal(size=3))
    assert value(more, w, 3) >= value(z, w, 3) - 1e-9


def test_polygon_order_refinement(rng):
    z = rng.normal(size=7) + 1j * rng.normal(size=7)
    w = 0.3j
    v64, v256 = value(z, w, 2, 64), value(z, w, 2, 256)
    assert v256 >= v64 - 1e-9
    assert v64 >= v256 * math.cos(math.pi / 64) - 1e-9


def test_polygon_modulus():
    v = np.exp(1j * np.linspace(0, 2 * np.pi, 50)) * 2
    pm = polygon_modulus(v, 16)
    assert np.all(pm <= 2 + 1e-12) and np.all(pm >= 2 * math.cos(math.pi / 16) - 1e-12)


def test_bad_L():
    with pytest.raises(ValueError):
        minimax(finite_set([0, 1]), monomial_basis(1, 1), PointConstraint(2), L=7)
    with pytest.raises(ValueError):
        minimax(finite_set([0, 1]), monomial_basis(1, 1), PointConstraint(2), L=6)


def test_membership_examples():
    seg = sample("segment N=200 x0=-1 y0=0 x1=1 y1=0")
    assert membership_numeric(seg, 0.5, 1).status == "member"
    K = finite_set(roots(5))
    assert membership_numeric(K, 0, 4).status == "member"
    v = membership_numeric(K, 0, 5)
    assert v.status == "non-member"
    cert = v.certificate
    assert abs(eval1(cert, 0)) >= 1 - 1e-12 and sup_norm(cert, K) < 1e-6
    A = arc_set(math.pi / 6)
    v = membership_numeric(A, 0.5, 2)
    assert v.status == "non-member" and v.certificate is not None
    assert sup_norm(v.certificate, arc_set(math.pi / 6, 20000)) < abs(eval1(v.certificate, 0.5))


def test_certificate_reverification_flags_bad_certificates():
    A = arc_set(1.0, 50)
    ok, info = verify_certificate(Poly1([1]), 0, A)
    assert not ok and info["resample_size"] == 500
    ok, _ = verify_certificate(Poly1([1, 0, 0]).scale(2) + Poly1([0, -1]), 3, A)
    assert not ok


def test_batched_equals_single(rng):
    z = rng.normal(size=8) + 1j * rng.normal(size=8)
    K = finite_set(z)
    ws = list(rng.normal(size=12) + 1j * rng.normal(size=12))
    many = minimax_many(K, monomial_basis(1, 3), ws)
    for w, s in zip(ws, many):
        single = minimax(K, monomial_basis(1, 3), PointConstraint(w), box=1e6)
        assert s.value == pytest.approx(single.value, abs=1e-7)
    verdicts = membership_numeric_many(K, ws, 3)
    assert [v.status for v in verdicts] == [membership_numeric(K, w, 3).status for w in ws]


def test_cross_oracle_on_small_configurations(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        w = complex(*rng.normal(size=2))
        ex = membership_exact(PointConfiguration(z), w)
        v = value(z, w, n)
        if ex.diagnostics["relative_residual"] >= 0.1:
            assert v < 1 - 1e-3
        # the LP value approximates the exact minimax value within the polygon factor
        assert ex.value / SEC - 1e-7 <= v <= ex.value + 1e-7


def test_grid_two_points_degree_one():
    g = grid_hull(finite_set([-1, 1]), 1, (-1.5, 1.5, -1.5, 1.5), 101)
    step = 3 / 100
    for x, y, _, s in g.cells():
        on_segment = abs(y) <= step + 1e-12 and abs(x) <= 1 + step + 1e-12
        if s == "member":
            assert on_segment
        elif abs(y) < 1e-12 and abs(x) <= 1 - 1e-12:
            pytest.fail(f"segment cell {x} not flagged")


def test_grid_cube_roots_degree_three():
    z = roots(3)
    g = grid_hull(finite_set(z), 3, (-1.2, 1.2, -1.2, 1.2), 41)
    step = 2.4 / 40
    for x, y, _, s in g.cells():
        if s == "member":
            assert np.abs(z - complex(x, y)).min() <= step


def test_grid_validation():
    with pytest.raises(ValueError):
        grid_hull(finite_set([0, 1]), 1, (-1, 1, -1, 1), 1)
    with pytest.raises(ValueError):
        grid_hull(finite_set([0, 5]), 1, (-1, 1, -1, 1), 5)


def test_grid_csv_schema():
    g = grid_hull(finite_set([-1, 1]), 1, (-1.5, 1.5, -1, 1), (4, 3))
    lines = g.to_csv().splitlines()
    assert lines[0] == "x,y,value,status" and len(lines) == 13
