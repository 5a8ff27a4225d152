import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symforms import (ArgumentError, CapacityError, ElementaryTensor, Field, FieldMismatchError,
                      OrthonormalBasis, PreconditionError, SymmetricForm, chebyshev_P, chebyshev_Q,
                      contract, diagonal_eval, gram_schmidt, lift, multilinear_eval, polarization_eval,
                      restrict)
from symforms.experiments import random_form
from symforms.forms import compose_linear, multi_indices


def monomial(alpha, c=1, field="real"):
    return SymmetricForm(field, len(alpha), sum(alpha), {tuple(alpha): c})


def unit(v):
    v = np.asarray(v, dtype=complex if np.iscomplexobj(v) else float)
    return v / np.linalg.norm(v)


def random_vectors(rng, field, d, k):
    out = []
    for _ in range(k):
        z = rng.standard_normal(d)
        if field == "complex":
            z = z + 1j * rng.standard_normal(d)
        out.append(z)
    return out


def tensor_eval(form, args):
    """Independent reference: contract the full coefficient tensor."""
    T = form.tensor()
    for v in args:
        T = T @ np.asarray(v)
    return complex(T)


# --- evaluation examples -----------------------------------------------------

def test_monomial_polarization_exact():
    val = polarization_eval(monomial((2, 1)), [(1, 0), (1, 0), (0, 1)])
    assert val == Fraction(1, 3)


def test_monomial_polarization_matches_placement_count():
    # x1^2 x2 spreads its coefficient evenly over the distinct index placements 112, 121, 211
    placements = set(itertools.permutations([0, 0, 1]))
    assert polarization_eval(monomial((2, 1)), [(1, 0), (1, 0), (0, 1)]) == Fraction(1, len(placements))


def test_cube_monomial_diagonal():
    assert polarization_eval(monomial((3, 0)), [(1, 0)] * 3) == 1


def test_chebyshev_p3_axis_value():
    assert polarization_eval(chebyshev_P(3), [(1, 0), (0, 1), (0, 1)]) == -1


def test_diagonal_examples():
    assert diagonal_eval(chebyshev_P(3), (1, 0)) == 1
    assert diagonal_eval(chebyshev_Q(3), (0, 1)) == -1
    assert diagonal_eval(chebyshev_P(4), (0, 0)) == 0


def test_exact_path_stays_rational():
    val = polarization_eval(chebyshev_Q(4), [(1, 0), (1, 0), (1, 0), (0, 1)])
    assert isinstance(val, Fraction) and val == 1


def test_argument_errors():
    P = chebyshev_P(3)
    with pytest.raises(ArgumentError):
        polarization_eval(P, [(1, 0), (0, 1)])
    with pytest.raises(ArgumentError):
        diagonal_eval(P, (1, 0, 0))
    with pytest.raises(FieldMismatchError):
        diagonal_eval(P, np.array([1j, 0]))
    with pytest.raises(CapacityError):
        polarization_eval(SymmetricForm("real", 2, 17, {(17, 0): 1}), [(1, 0)] * 17)


def test_real_vector_into_complex_form():
    Pc = chebyshev_P(3).complexify()
    assert diagonal_eval(Pc, (1, 0)) == 1


# --- contraction -------------------------------------------------------------

def test_contract_bilinear_with_e1():
    T = SymmetricForm("real", 2, 2, {(2, 0): 1, (0, 2): -1})
    S = contract(T, [(1, 0)])
    assert S.degree == 1 and S.coeff((1, 0)) == 1 and S.coeff((0, 1)) == 0


def test_contract_p3_with_e1_is_diag():
    S = contract(chebyshev_P(3), [(1, 0)])
    assert S.coeff((2, 0)) == 1 and S.coeff((0, 2)) == -1 and S.coeff((1, 1)) == 0


def test_contract_with_zero_is_zero():
    assert contract(chebyshev_Q(5), [(0, 0)]).is_zero


def test_contract_too_many_slots():
    with pytest.raises(ArgumentError):
        contract(chebyshev_P(2), [(1, 0), (0, 1)])


@pytest.mark.parametrize("field", ["real", "complex"])
def test_contraction_coherence(rng, field):
    for d, k, m in [(2, 4, 1), (2, 5, 2), (3, 4, 2), (3, 3, 1)]:
        form = random_form(rng, field, d, k)
        vs = random_vectors(rng, field, d, k)
        S = contract(form, vs[k - m:])
        assert abs(complex(polarization_eval(S, vs[:k - m])) - complex(polarization_eval(form, vs))) <= 1e-12 * (
            1 + abs(complex(polarization_eval(form, vs))))


# --- restriction and bases ---------------------------------------------------

def test_restrict_identity():
    P = chebyshev_P(4)
    assert restrict(P, OrthonormalBasis("real", ((1, 0), (0, 1)))).coeffs == P.coeffs


def test_restrict_to_diagonal_line_kills_hyperbolic_form():
    T = SymmetricForm("real", 2, 2, {(2, 0): 1, (0, 2): -1})
    s = 1 / math.sqrt(2)
    R = restrict(T, OrthonormalBasis("real", ((s, s),)))
    assert R.dim == 1 and abs(complex(R.coeff((2,)))) <= 1e-15


def test_restrict_cylinder_form():
    P3 = chebyshev_P(3)
    embedded = SymmetricForm("real", 3, 3, {a + (0,): c for a, c in P3.coeffs.items()})
    R = restrict(embedded, OrthonormalBasis("real", ((1, 0, 0), (0, 1, 0))))
    assert R.coeffs == P3.coeffs


def test_restrict_rejects_non_orthonormal():
    with pytest.raises(PreconditionError):
        OrthonormalBasis("real", ((1, 0), (1, 1)))


def test_restrict_then_lift_round_trip(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((3, 2)))
    basis = OrthonormalBasis("real", tuple(Q.T))
    form = random_form(rng, "real", 2, 4)
    assert restrict(lift(form, basis), basis).max_coeff_distance(form) <= 1e-12


def test_gram_schmidt_examples():
    b, n = gram_schmidt([(1, 0), (0, 1)])
    assert n == 2 and b.gram_defect() <= 1e-15
    b, n = gram_schmidt([(1, 0), (2, 0)], tol=1e-9)
    assert n == 1 and np.allclose(b.matrix[:, 0], [1, 0])
    s = 1 / math.sqrt(2)
    _, n = gram_schmidt([(1, 0, 0), (s, s, 0), (0, 0, 1)])
    assert n == 3
    b, n = gram_schmidt([(0, 0), (0, 0)])
    assert n == 0 and b.rank == 0


def test_gram_schmidt_complex(rng):
    vs = random_vectors(rng, "complex", 3, 2)
    b, n = gram_schmidt(vs + [vs[0] * (0.3 - 2j)])
    assert n == 2 and b.gram_defect() <= 1e-12


def test_elementary_tensor_checks():
    with pytest.raises(PreconditionError):
        ElementaryTensor("real", ((1, 1), (1, 0)))
    with pytest.raises(ArgumentError):
        ElementaryTensor("real", ((1, 0), (1, 0, 0)))


# --- serialization -----------------------------------------------------------

def test_form_json_round_trip(rng):
    for field in ("real", "complex"):
        form = random_form(rng, field, 3, 3)
        back = SymmetricForm.from_dict(form.to_dict())
        assert back.max_coeff_distance(form) == 0.0
    assert SymmetricForm.from_dict(chebyshev_P(5).to_dict()).coeffs == chebyshev_P(5).coeffs


def test_form_from_bad_document():
    with pytest.raises(ArgumentError):
        SymmetricForm.from_dict({"field": "real", "dim": 2})


# --- invariants (property-based) ---------------------------------------------

dims_degrees = st.sampled_from([(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4)])


@settings(max_examples=40, deadline=None)
@given(dk=dims_degrees, field=st.sampled_from(["real", "complex"]), seed=st.integers(0, 2 ** 32 - 1))
def test_permutation_symmetry(dk, field, seed):
    d, k = dk
    r = np.random.default_rng(seed)
    form = random_form(r, field, d, k)
    vs = [unit(v) for v in random_vectors(r, field, d, k)]
    base = complex(polarization_eval(form, vs))
    scale = max(1.0, form.hilbert_schmidt_norm())
    for p in itertools.permutations(range(k)):
        assert abs(complex(polarization_eval(form, [vs[i] for i in p])) - base) <= 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(dk=dims_degrees, field=st.sampled_from(["real", "complex"]), seed=st.integers(0, 2 ** 32 - 1))
def test_diagonal_consistency(dk, field, seed):
    d, k = dk
    r = np.random.default_rng(seed)
    form = random_form(r, field, d, k)
    w = unit(random_vectors(r, field, d, 1)[0])
    assert abs(complex(polarization_eval(form, [w] * k)) - complex(diagonal_eval(form, w))) <= 1e-12 * max(
        1.0, form.hilbert_schmidt_norm())


@settings(max_examples=40, deadline=None)
@given(dk=dims_degrees, field=st.sampled_from(["real", "complex"]), seed=st.integers(0, 2 ** 32 - 1))
def test_multilinearity(dk, field, seed):
    d, k = dk
    r = np.random.default_rng(seed)
    form = random_form(r, field, d, k)
    vs = random_vectors(r, field, d, k + 1)
    a, b = (1.7, -0.4) if field == "real" else (1.7 - 0.2j, 0.5j)
    slot = int(r.integers(k))
    mixed = list(vs[:k])
    mixed[slot] = a * vs[slot] + b * vs[k]
    other = list(vs[:k])
    other[slot] = vs[k]
    lhs = complex(polarization_eval(form, mixed))
    rhs = a * complex(polarization_eval(form, vs[:k])) + b * complex(polarization_eval(form, other))
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@settings(max_examples=25, deadline=None)
@given(dk=dims_degrees, field=st.sampled_from(["real", "complex"]), seed=st.integers(0, 2 ** 32 - 1))
def test_polarization_matches_tensor_contraction(dk, field, seed):
    d, k = dk
    r = np.random.default_rng(seed)
    form = random_form(r, field, d, k)
    vs = random_vectors(r, field, d, k)
    ref = tensor_eval(form, vs)
    assert abs(complex(polarization_eval(form, vs)) - ref) <= 1e-11 * (1 + abs(ref))
    assert abs(complex(multilinear_eval(form, vs)) - ref) <= 1e-11 * (1 + abs(ref))


def test_compose_linear_matches_substitution(rng):
    form = random_form(rng, "real", 3, 4)
    M = rng.standard_normal((3, 2))
    u = rng.standard_normal(2)
    composed = compose_linear(form, M)
    assert abs(diagonal_eval(composed, u) - diagonal_eval(form, M @ u)) <= 1e-12 * (1 + abs(diagonal_eval(form, M @ u)))


def test_multi_indices_count():
    for d, k in [(2, 5), (3, 4), (4, 3)]:
        assert len(multi_indices(d, k)) == math.comb(k + d - 1, d - 1)
