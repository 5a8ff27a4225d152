import numpy as np
import pytest
from scipy.optimize import linprog

from symforms import ArgumentError
from symforms.simplex import solve_lp


def highs(c, A, b):
    """Reference optimum from scipy's HiGHS solver."""
    res = linprog(-np.asarray(c), A_ub=A, b_ub=b, bounds=[(None, None)] * len(c), method="highs")
    return res


def test_box():
    res = solve_lp([1, 2], [[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 1, 1])
    assert res.status == "optimal" and abs(res.value - 3) <= 1e-12
    assert np.allclose(res.x, [1, 1], atol=1e-12)


def test_duals_certify_optimum():
    A = np.array([[1, 1], [1, -1], [-1, 0], [0, -1]], float)
    b = np.array([2, 1, 0, 0], float)
    c = np.array([3, 1], float)
    res = solve_lp(c, A, b)
    assert np.all(res.duals >= 0)
    assert np.allclose(A.T @ res.duals, c, atol=1e-12)
    assert abs(b @ res.duals - res.value) <= 1e-12


def test_unbounded_and_infeasible():
    assert solve_lp([1, 0], [[0, 1]], [1]).status == "unbounded"
    assert solve_lp([1], [[1], [-1]], [-1, -1]).status == "infeasible"


def test_dimension_check():
    with pytest.raises(ArgumentError):
        solve_lp([1, 1], [[1, 0, 0]], [1])


def test_degenerate_polytope():
    # many constraints through the optimal vertex
    t = np.linspace(0, np.pi / 2, 40)
    A = np.column_stack([np.cos(t), np.sin(t)])
    A = np.vstack([A, A, [[-1, 0], [0, -1]]])
    b = np.concatenate([np.ones(80), [0, 0]])
    res = solve_lp([1, 1], A, b)
    ref = highs([1, 1], A, b)
    assert abs(res.value - (-ref.fun)) <= 1e-9


def test_against_highs_random(rng):
    bad = 0
    for _ in range(150):
        n = int(rng.integers(2, 12))
        m = int(rng.integers(n + 1, 6 * n))
        # bounded feasible region: random halfspaces around the origin plus a box
        A = np.vstack([rng.standard_normal((m, n)), np.eye(n), -np.eye(n)])
        b = np.concatenate([rng.uniform(0.1, 2.0, m), 10 * np.ones(2 * n)])
        c = rng.standard_normal(n)
        res = solve_lp(c, A, b)
        ref = highs(c, A, b)
        assert res.status == "optimal" and ref.status == 0
        if abs(res.value - (-ref.fun)) > 1e-8 * max(1.0, abs(ref.fun)):
            bad += 1
        assert np.all(A @ res.x <= b + 1e-9)
    assert bad == 0


def test_deterministic(rng):
    A = np.vstack([rng.standard_normal((60, 6)), np.eye(6), -np.eye(6)])
    b = np.concatenate([rng.uniform(0.5, 1.5, 60), np.ones(12)])
    c = rng.standard_normal(6)
    first, second = solve_lp(c, A, b), solve_lp(c, A, b)
    assert np.array_equal(first.x, second.x) and first.iterations == second.iterations
