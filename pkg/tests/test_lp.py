"""The in-package simplex against scipy's HiGHS on random and degenerate programs."""

import numpy as np
import pytest
from scipy.optimize import linprog

from hullbound import lp


def slack_form(M, rhs):
    m = M.shape[0]
    A = np.hstack([M, np.eye(m)])
    return A, np.arange(M.shape[1], M.shape[1] + m)


def random_lp(rng, m, n):
    M = rng.normal(size=(m, n))
    rhs = rng.uniform(0.5, 2.0, size=m)
    c = np.concatenate([rng.normal(size=n), np.zeros(m)])
    # bound the feasible region so every instance has an optimum
    M = np.vstack([M, np.ones((1, n))])
    rhs = np.append(rhs, 10.0)
    A, basis = slack_form(M, rhs)
    c = np.concatenate([c[:n], np.zeros(m + 1)])
    return A, c, rhs, basis


@pytest.mark.parametrize("m,n", [(3, 4), (8, 12), (20, 30), (40, 15)])
def test_matches_highs(rng, m, n):
    for _ in range(5):
        A, c, b, basis = random_lp(rng, m, n)
        res = lp.simplex(A, c, b, basis[None])
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        assert res.status[0] == lp.OPTIMAL
        assert res.objective[0] == pytest.approx(ref.fun, abs=1e-8 * (1 + abs(ref.fun)))
        # dual feasibility of the returned multipliers
        assert np.all(c - res.y[0] @ A >= -1e-7)


def test_batch_with_own_columns(rng):
    m, n, P = 6, 8, 5
    A, c, b, basis = random_lp(rng, m, n)
    own = rng.normal(size=(P, m + 1, 2))
    c_own = rng.normal(size=(P, 2))
    res = lp.simplex(A, c, b, np.tile(basis, (P, 1)), own, c_own)
    for p in range(P):
        full = np.hstack([A, own[p]])
        ref = linprog(np.concatenate([c, c_own[p]]), A_eq=full, b_eq=b, bounds=(0, None), method="highs")
        if ref.status == 3:
            assert res.status[p] == lp.UNBOUNDED
        else:
            assert res.status[p] == lp.OPTIMAL
            assert res.objective[p] == pytest.approx(ref.fun, abs=1e-8 * (1 + abs(ref.fun)))


def test_pricer_path_agrees_with_dense(rng):
    A, c, b, basis = random_lp(rng, 10, 25)

    def pricer(y):
        d = c[None, :] - y @ A
        idx = d.argmin(axis=1)
        return d[np.arange(len(idx)), idx], idx

    dense = lp.simplex(A, c, b, basis[None])
    priced = lp.simplex(A, c, b, basis[None], pricer=pricer)
    assert priced.objective[0] == pytest.approx(dense.objective[0], abs=1e-9)


def test_unbounded():
    A = np.array([[1.0, -1.0, 1.0]])
    res = lp.simplex(A, np.array([0.0, -1.0, 0.0]), np.array([1.0]), np.array([[2]]))
    assert res.status[0] == lp.UNBOUNDED


def test_beale_cycling_example():
    # Beale's degenerate program cycles under textbook Dantzig pricing
    M = np.array([[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]])
    b = np.array([0.0, 0.0, 1.0])
    A, basis = slack_form(M, b)
    c = np.array([-0.75, 20, -0.5, 6, 0, 0, 0])
    res = lp.simplex(A, c, b, basis[None])
    assert res.status[0] == lp.OPTIMAL
    assert res.objective[0] == pytest.approx(-1.25, abs=1e-9)


def test_infeasible_start_is_rejected():
    A = np.array([[1.0, 1.0]])
    with pytest.raises(lp.LPError):
        lp.simplex(A, np.zeros(2), np.array([-1.0]), np.array([[1]]))


def test_iteration_limit(rng):
    A, c, b, basis = random_lp(rng, 20, 30)
    res = lp.simplex(A, c, b, basis[None], max_iter=1)
    assert res.status[0] == lp.ITERATION_LIMIT
