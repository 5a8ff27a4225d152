import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symforms import (GridTooCoarseError, SymmetricForm, UnsupportedError, attainment_defect, chebyshev_P,
                      chebyshev_Q, collinear_witness, complex_sphere_grid, diagonal_eval, form_norm,
                      multilinear_norm_bruteforce, sup_norm_complex_2d, sup_norm_real_2d, sup_norm_sphere)
from symforms.experiments import random_form
from symforms.forms import compose_linear, evaluate_many
from symforms.norms import real_2d_local_maxima

HYPERBOLIC = SymmetricForm("real", 2, 2, {(2, 0): 1, (0, 2): -1})


def circle_values(form, t):
    return evaluate_many(form, np.column_stack([np.cos(t), np.sin(t)]))


# --- real circle -------------------------------------------------------------

def test_p3_norm_and_maximizer():
    res = sup_norm_real_2d(chebyshev_P(3))
    assert abs(res.value - 1) <= 1e-12
    assert any(np.allclose(w, [1, 0], atol=1e-9) or np.allclose(w, [-1, 0], atol=1e-9) for w in res.maximizers)
    assert res.certified_lower <= res.value <= res.certified_upper


def test_q5_norm_one():
    assert abs(sup_norm_real_2d(chebyshev_Q(5)).value - 1) <= 1e-12


def test_zero_form():
    res = sup_norm_real_2d(SymmetricForm.zero("real", 2, 3))
    assert res.value == 0 and res.maximizers == []


def test_real_2d_rejects_complex():
    with pytest.raises(UnsupportedError):
        sup_norm_real_2d(chebyshev_P(3).complexify())


def test_all_maximizers_enumerated():
    # |P_k| = |cos k t| peaks at the 2k points t = pi j / k of the circle
    for k in (3, 4, 7):
        res = sup_norm_real_2d(chebyshev_P(k))
        t = np.sort(np.mod([math.atan2(w[1], w[0]) for w in res.maximizers], 2 * np.pi))
        assert len(t) == 2 * k
        assert np.allclose(t, np.pi * np.arange(2 * k) / k, atol=1e-9)


def test_real_2d_against_dense_sampling(rng):
    t = np.linspace(0.0, np.pi, 100_001)
    for k in range(2, 9):
        form = random_form(rng, "real", 2, k)
        dense = float(np.max(np.abs(circle_values(form, t))))
        res = sup_norm_real_2d(form)
        assert dense <= res.value + 1e-12 and res.value - dense <= 1e-6 * res.value
        assert res.certified_upper >= res.value and res.certified_upper - res.value <= 1e-2 * res.value


def test_local_maxima_of_chebyshev():
    t = real_2d_local_maxima(chebyshev_P(5), 0.5)
    assert len(t) == 5
    assert np.allclose(np.sort(t), np.pi * np.arange(5) / 5, atol=1e-9)


# --- complex sphere ----------------------------------------------------------

def test_complexified_p3_exceeds_one():
    res = sup_norm_complex_2d(chebyshev_P(3).complexify())
    assert res.value > 1.0 + 1e-3
    assert res.certified_lower <= res.value <= res.certified_upper


def test_complex_cube_monomial():
    res = sup_norm_complex_2d(SymmetricForm("complex", 2, 3, {(3, 0): 1}))
    assert abs(res.value - 1) <= 1e-12
    assert np.allclose(res.maximizers[0], [1, 0], atol=1e-6)


def test_complex_zero_form():
    assert sup_norm_complex_2d(SymmetricForm.zero("complex", 2, 4)).value == 0


def test_complex_grid_too_coarse():
    with pytest.raises(GridTooCoarseError):
        sup_norm_complex_2d(chebyshev_P(6).complexify(), complex_sphere_grid(2))


def test_complex_maximizer_phase_convention(rng):
    res = sup_norm_complex_2d(random_form(rng, "complex", 2, 4))
    for w in res.maximizers:
        first = w[np.flatnonzero(np.abs(w) > 1e-12)[0]]
        assert abs(first.imag) <= 1e-12 and first.real > 0


def test_complex_upper_bound_tightens_with_grid(rng):
    form = random_form(rng, "complex", 2, 3)
    uppers = [sup_norm_complex_2d(form, complex_sphere_grid(n)).certified_upper for n in (8, 16, 32)]
    assert uppers[0] >= uppers[1] - 1e-12 and uppers[1] >= uppers[2] - 1e-12


# --- brute-force oracle ------------------------------------------------------

def test_oracle_hyperbolic_form():
    res = multilinear_norm_bruteforce(HYPERBOLIC, restarts=8)
    assert abs(res.value - 1) <= 1e-10
    x, y = res.maximizers
    # maximizing pairs look like (a, b), (a, -b) up to signs
    assert abs(abs(x[0]) - abs(y[0])) <= 1e-6 and abs(abs(x[1]) - abs(y[1])) <= 1e-6


def test_oracle_p3():
    assert abs(multilinear_norm_bruteforce(chebyshev_P(3)).value - 1) <= 1e-10


def test_oracle_rank_one():
    x = np.array([0.6, 0.8])
    res = multilinear_norm_bruteforce(collinear_witness(x, 2).form)
    assert abs(res.value - 1) <= 1e-10
    for w in res.maximizers:
        assert abs(abs(w @ x) - 1) <= 1e-6


# --- attainment defect -------------------------------------------------------

def test_defect_examples():
    assert abs(attainment_defect(HYPERBOLIC, [(1, 0), (1, 0)])) <= 1e-12
    assert abs(attainment_defect(chebyshev_P(3), [(1, 0), (0, 1), (0, 1)])) <= 1e-12
    assert abs(attainment_defect(chebyshev_P(3), [(0, 1)] * 3) - 1) <= 1e-12


# --- dispatch and general spheres --------------------------------------------

def test_sphere_engine_matches_planar_engine(rng):
    form = random_form(rng, "real", 2, 4)
    embedded = SymmetricForm("real", 3, 4, {a + (0,): c for a, c in form.coeffs.items()})
    assert abs(sup_norm_sphere(embedded).value - sup_norm_real_2d(form).value) <= 1e-9


def test_quadratic_norm_is_spectral(rng):
    form = random_form(rng, "real", 3, 2)
    assert abs(form_norm(form).value - np.max(np.abs(np.linalg.eigvalsh(form.tensor())))) <= 1e-12


# --- invariants --------------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(field=st.sampled_from(["real", "complex"]), k=st.integers(2, 5), seed=st.integers(0, 2 ** 32 - 1),
       c=st.floats(0.1, 10.0))
def test_homogeneity(field, k, seed, c):
    form = random_form(np.random.default_rng(seed), field, 2, k)
    scale = c if field == "real" else c * np.exp(0.7j)
    a, b = form_norm(form).value, form_norm(form.scale(scale)).value
    assert abs(b - c * a) <= 1e-12 * max(1.0, c * a)


@settings(max_examples=15, deadline=None)
@given(field=st.sampled_from(["real", "complex"]), k=st.integers(2, 5), seed=st.integers(0, 2 ** 32 - 1))
def test_rotation_invariance(field, k, seed):
    r = np.random.default_rng(seed)
    form = random_form(r, field, 2, k)
    G = r.standard_normal((2, 2)) + (1j * r.standard_normal((2, 2)) if field == "complex" else 0)
    U, _ = np.linalg.qr(G)
    rotated = compose_linear(form, U)
    assert abs(form_norm(rotated).value - form_norm(form).value) <= 1e-9 * max(1.0, form_norm(form).value)


def test_restriction_does_not_increase_norm(rng):
    from symforms import OrthonormalBasis, restrict
    for _ in range(5):
        form = random_form(rng, "real", 3, 3)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 2)))
        R = restrict(form, OrthonormalBasis("real", tuple(Q.T)))
        assert form_norm(R).value <= form_norm(form).value + 1e-8


def test_certified_sandwich(rng):
    for field in ("real", "complex"):
        for d, k in ((2, 2), (2, 3), (2, 5), (3, 3)):
            if field == "complex" and d == 3:
                continue
            form = random_form(rng, field, d, k)
            res = form_norm(form)
            assert res.certified_lower <= res.value <= res.certified_upper
            for w in res.maximizers:
                assert abs(complex(diagonal_eval(form, w))) >= res.certified_lower - 1e-12
