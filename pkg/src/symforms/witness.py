"""Constructive witnesses: forms that attain their norm at a prescribed tuple.

Covers the bilinear case (any pair of vectors), rank-one forms for
collinear tuples, the norm-one polynomials ``P_k = Re (x_1 + i x_2)^k`` and
``Q_k = Im (x_1 + i x_2)^k``, and the recursive construction on the dyadic
directions ``D_n = {(cos t, sin t): t = pi l / 2^n}`` of the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .errors import ArgumentError, CapacityError, NotAttainingError, PreconditionError
from .forms import (MAX_POLARIZATION_DEGREE, Field, OrthonormalBasis, SymmetricForm, coerce_vector,
                    contract, field_of, gram_schmidt, inner, is_parallel, is_unit, lift,
                    polarization_eval, vector_norm)
from .norms import form_norm, sup_norm_real_2d, _vector_json

CONSTRUCTIONS = ("bilinear", "collinear", "step1", "dyadic", "limit", "lp-extremal")


@dataclass
class AttainmentCertificate:
    """A form, the tuple where it (nearly) attains its norm, and the numbers.

    ``defect = norm_upper - |value|``.  For ``limit`` certificates the
    value and defect refer to the original tuple while the form was built
    for ``snapped_tuple``.
    """

    form: SymmetricForm
    tuple: list
    value: object
    norm_upper: object
    defect: float
    construction: str
    snapped_tuple: list | None = None
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        def scalar(z):
            if isinstance(z, Fraction):
                return float(z) if z.denominator != 1 else z.numerator
            if isinstance(z, complex):
                return {"re": z.real, "im": z.imag}
            return z

        doc = {"construction": self.construction, "form": self.form.to_dict(),
               "tuple": [_vector_json(np.asarray(v, dtype=float if self.form.field is Field.REAL else complex))
                         for v in self.tuple],
               "value": scalar(self.value), "norm_upper": scalar(self.norm_upper),
               "defect": float(self.defect), "details": self.details}
        if self.snapped_tuple is not None:
            doc["snapped_tuple"] = [_vector_json(np.asarray(v, dtype=float)) for v in self.snapped_tuple]
        return doc


def _certificate(form, tuple_, construction, norm_upper=None, **kw) -> AttainmentCertificate:
    value = polarization_eval(form, tuple_)
    if norm_upper is None:
        norm_upper = form_norm(form).value
    defect = norm_upper - abs(value) if isinstance(value, Fraction) else float(norm_upper) - abs(complex(value))
    return AttainmentCertificate(form, list(tuple_), value, norm_upper, float(defect), construction, **kw)


def _check_units(vectors, field):
    out = [coerce_vector(v, field) for v in vectors]
    if len({len(v) for v in out}) != 1:
        raise ArgumentError("vectors differ in dimension")
    for v in out:
        if not is_unit(v, 1e-10):
            raise PreconditionError(f"{v} is not a unit vector")
    return out


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

def _aligning_phase(x, y, field: Field):
    """Unimodular ``lam`` with ``<lam y, x>`` real and nonnegative."""
    s = inner(y, x)
    if abs(s) < 1e-15:
        return 1.0
    if field is Field.REAL:
        return 1.0 if s.real >= 0 else -1.0
    return complex(np.conj(s) / abs(s))


def _split_pair(x, y, field: Field):
    lam = _aligning_phase(x, y, field)
    x = np.asarray(x, dtype=field.dtype)
    y = np.asarray(y, dtype=field.dtype)
    plus, minus = x + lam * y, x - lam * y
    return plus / np.linalg.norm(plus), minus / np.linalg.norm(minus)


def _square_of_functional(g, field: Field) -> SymmetricForm:
    """``w -> <w, g>^2`` as a form."""
    return SymmetricForm.power_of_linear(field, np.conj(g) if field is Field.COMPLEX else g, 2)


def _canonical_sign(v):
    v = np.asarray(v)
    for z in v:
        if abs(z) > 1e-12:
            return v if z.real >= 0 else -v
    return v


def diagonalize_bilinear(T: SymmetricForm, x, y) -> OrthonormalBasis:
    """Orthonormal ``{f_1, f_2}`` with ``T(f_1,f_1) = 1``, ``T(f_2,f_2) = -1``, ``T(f_1,f_2) = 0``.

    ``T`` must have norm one and attain it at the non-parallel pair
    ``(x, y)``.  With ``lam`` aligning the phases of ``x`` and ``y``, the
    vectors ``g_{1,2} = (x +- lam y)/|x +- lam y|`` are orthonormal and
    ``|T(g_i, g_i)| = 1``; unimodular rescalings turn the diagonal into
    ``(1, -1)``.  Real bases are unique up to signs and are returned with
    the first nonzero coordinate of each vector positive.
    """
    if T.degree != 2:
        raise ArgumentError("diagonalize_bilinear needs a bilinear form")
    field = T.field
    x, y = _check_units([x, y], field)
    if len(x) != T.dim:
        raise ArgumentError("vectors do not match the form's dimension")
    norm = form_norm(T).value
    if abs(norm - 1.0) > 1e-9:
        raise PreconditionError(f"form has norm {norm}, expected 1")
    if is_parallel(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)):
        raise PreconditionError("x and y are parallel")
    defect = norm - abs(complex(polarization_eval(T, [x, y])))
    if defect > 1e-9:
        raise NotAttainingError(f"form does not attain its norm at (x, y): defect {defect:.3e}")
    g1, g2 = _split_pair(x, y, field)
    t1 = complex(polarization_eval(T, [g1, g1]))
    t2 = complex(polarization_eval(T, [g2, g2]))
    if field is Field.REAL:
        if t1.real < 0:
            g1, g2 = g2, g1
        return OrthonormalBasis(field, (_canonical_sign(g1), _canonical_sign(g2)))
    f1 = np.sqrt(1.0 / t1) * g1
    f2 = np.sqrt(-1.0 / t2) * g2
    return OrthonormalBasis(field, (f1, f2))


def rotated_complex_basis(basis: OrthonormalBasis) -> OrthonormalBasis:
    """``{(f_1 + i f_2)/sqrt 2, (i f_1 + f_2)/sqrt 2}``: another diagonalizing basis over C.

    The relative sign of the ``i f_1`` term matters: with ``-i f_1`` the two
    vectors are not orthogonal and ``T(h_1, h_2) = -i``.
    """
    f1, f2 = (np.asarray(v, dtype=np.complex128) for v in basis.vectors)
    s = 1.0 / math.sqrt(2.0)
    return OrthonormalBasis(Field.COMPLEX, (s * (f1 + 1j * f2), s * (1j * f1 + f2)))


def bilinear_witness(x, y, field=None) -> AttainmentCertificate:
    """A norm-one symmetric bilinear form attaining its norm at ``(x, y)``.

    Parallel pairs get ``<w_1, x><w_2, x>``; otherwise
    ``<w_1, g_1><w_2, g_1> - <w_1, g_2><w_2, g_2>`` with ``g_1, g_2`` as in
    :func:`diagonalize_bilinear`.  The form is then multiplied by a
    unimodular scalar so that ``T(x, y) = 1``.
    """
    field = Field(field) if field is not None else field_of([x, y])
    x, y = _check_units([x, y], field)
    xa = np.asarray(x, dtype=field.dtype)
    ya = np.asarray(y, dtype=field.dtype)
    if is_parallel(xa.astype(complex), ya.astype(complex)):
        T = _square_of_functional(xa, field)
    else:
        g1, g2 = _split_pair(xa, ya, field)
        T = _square_of_functional(g1, field) - _square_of_functional(g2, field)
    # T(x, y) is unimodular (conj(lam) for the split above); rotate it to 1
    v = complex(polarization_eval(T, [x, y]))
    phase = np.conj(v) / abs(v)
    T = T.scale(phase.real if field is Field.REAL else phase)
    return _certificate(T, [x, y], "bilinear")


def collinear_witness(x, k: int, field=None) -> AttainmentCertificate:
    """``T(w_1..w_k) = prod_i <w_i, x>``, which has norm one for unit ``x``."""
    if k < 1:
        raise ArgumentError("degree must be at least 1")
    field = Field(field) if field is not None else field_of([x])
    (x,) = _check_units([x], field)
    a = np.conj(np.asarray(x, dtype=np.complex128)) if field is Field.COMPLEX else x
    T = SymmetricForm.power_of_linear(field, a, k)
    # |<w, x>|^k <= 1 by Cauchy-Schwarz, with equality at w = x
    return _certificate(T, [x] * k, "collinear", norm_upper=1)


# ---------------------------------------------------------------------------
# the norm-one polynomials P_k and Q_k
# ---------------------------------------------------------------------------

def chebyshev_P(k: int) -> SymmetricForm:
    """``sum_l C(k, 2l) (-1)^l x_1^{k-2l} x_2^{2l}`` = ``Re (x_1 + i x_2)^k``."""
    if k < 1:
        raise ArgumentError("degree must be at least 1")
    return SymmetricForm(Field.REAL, 2, k, {(k - 2 * l, 2 * l): comb(k, 2 * l) * (-1) ** l
                                            for l in range(k // 2 + 1)})


def chebyshev_Q(k: int) -> SymmetricForm:
    """``sum_l C(k, 2l+1) (-1)^l x_1^{k-2l-1} x_2^{2l+1}`` = ``Im (x_1 + i x_2)^k``."""
    if k < 1:
        raise ArgumentError("degree must be at least 1")
    return SymmetricForm(Field.REAL, 2, k, {(k - 2 * l - 1, 2 * l + 1): comb(k, 2 * l + 1) * (-1) ** l
                                            for l in range((k - 1) // 2 + 1)})


def step1_form(i: int, j: int) -> SymmetricForm:
    """``P_k`` when ``j`` is even, ``Q_k`` when ``j`` is odd (``k = i + j``).

    The monomial ``x_1^i x_2^j`` occurs in exactly one of the two, with
    coefficient ``+-C(k, j)``, and its polarization at ``(e_1^i, e_2^j)``
    is ``1/C(k, j)``.
    """
    return chebyshev_P(i + j) if j % 2 == 0 else chebyshev_Q(i + j)


def step1_witness(i: int, j: int) -> AttainmentCertificate:
    """Exact certificate at ``(e_1, ..., e_1, e_2, ..., e_2)`` (``i`` and ``j`` copies)."""
    if i < 0 or j < 0:
        raise ArgumentError("multiplicities must be nonnegative")
    if i + j < 1:
        raise ArgumentError("degree must be at least 1")
    form = step1_form(i, j)
    tuple_ = [(1, 0)] * i + [(0, 1)] * j
    # P_k and Q_k have norm one: |Re e^{ikt}|, |Im e^{ikt}| <= 1 with equality at t = 0 resp. pi/(2k)
    return _certificate(form, tuple_, "step1", norm_upper=1, details={"i": i, "j": j})


# ---------------------------------------------------------------------------
# dyadic directions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicVector:
    """The unit vector at angle ``pi * index / 2^level``, ``1 <= index <= 2^(level+1)``."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 1:
            raise ArgumentError("dyadic level must be positive")
        if not 1 <= self.index <= 2 ** (self.level + 1):
            raise ArgumentError(f"index {self.index} outside [1, {2 ** (self.level + 1)}]")

    @classmethod
    def wrap(cls, level: int, index: int) -> DyadicVector:
        period = 2 ** (level + 1)
        index %= period
        return cls(level, index or period)

    @classmethod
    def nearest(cls, theta: float, level: int) -> DyadicVector:
        return cls.wrap(level, int(round(theta * 2 ** level / math.pi)))

    @property
    def angle(self) -> float:
        return math.pi * self.index / 2 ** self.level

    @property
    def vector(self):
        """Exact integer coordinates on the axes, floats elsewhere."""
        q, r = divmod(self.index * 2, 2 ** self.level)
        if r == 0:
            return ((1, 0), (0, 1), (-1, 0), (0, -1))[q % 4]
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    def lifted(self, level: int) -> DyadicVector:
        if level < self.level:
            raise ArgumentError("cannot lift to a coarser level")
        return DyadicVector(level, self.index * 2 ** (level - self.level))

    def parents(self) -> tuple[DyadicVector, DyadicVector]:
        """``y, z`` one level down with ``(y + z)/|y + z|`` equal to this vector.

        Even indices already live one level down and pair with themselves;
        odd ones use the two neighbours at angles ``t +- pi/2^level``.
        """
        if self.level == 1:
            raise ArgumentError("level-1 vectors have no parents")
        if self.index % 2 == 0:
            y = DyadicVector(self.level - 1, self.index // 2)
            return y, y
        return (DyadicVector.wrap(self.level - 1, (self.index - 1) // 2),
                DyadicVector.wrap(self.level - 1, (self.index + 1) // 2))


def _dyadic_form(targets: list[DyadicVector]) -> tuple[SymmetricForm, int]:
    """Witness form for ``targets`` and the sign of its value there."""
    level = targets[0].level
    if level == 1:
        i = sum(1 for t in targets if t.index % 2 == 0)
        j = len(targets) - i
        sign = (-1) ** (j // 2)
        for t in targets:
            if t.index in (2, 3):
                sign = -sign
        return step1_form(i, j), sign
    parents = []
    for t in targets:
        parents.extend(t.parents())
    L, sign = _dyadic_form(parents)
    return contract(L, [t.vector for t in targets]), sign


def dyadic_degree(k: int, level: int) -> int:
    """Degree of the base (axis tuple) form used for ``k`` targets at ``level``."""
    return k * 2 ** (level - 1)


def dyadic_witness(targets: Sequence[DyadicVector]) -> AttainmentCertificate:
    """Witness for a tuple of dyadic directions.

    Recursion on the level: each target ``x_i`` is the normalized sum of its
    parents ``y_i, z_i``; a witness ``L`` of degree ``2k`` for the parent
    tuple also attains its norm at ``(x_1, x_1, ..., x_k, x_k)``, so
    ``L(., ..., ., x_1, ..., x_k)`` attains its norm at ``(x_1, ..., x_k)``.
    The base level is handled by :func:`step1_form`, with sign flips for
    negative axis directions absorbed into the value.
    """
    targets = list(targets)
    if not targets:
        raise ArgumentError("need at least one target")
    level = max(t.level for t in targets)
    targets = [t.lifted(level) for t in targets]
    k = len(targets)
    deg = dyadic_degree(k, level)
    if deg > MAX_POLARIZATION_DEGREE:
        raise CapacityError(f"level {level} with {k} targets needs degree {deg} > {MAX_POLARIZATION_DEGREE}")
    form, sign = _dyadic_form(targets)
    norm = sup_norm_real_2d(form)
    cert = _certificate(form, [t.vector for t in targets], "step1" if level == 1 else "dyadic",
                        norm_upper=norm.value,
                        details={"level": level, "indices": [t.index for t in targets],
                                 "base_degree": deg, "expected_sign": sign,
                                 "norm_certified_upper": norm.certified_upper})
    return cert


def max_dyadic_level(k: int) -> int:
    level = 1
    while dyadic_degree(k, level + 1) <= MAX_POLARIZATION_DEGREE:
        level += 1
    return level


def snap_to_dyadic(vectors: Sequence, eps: float) -> tuple[list[DyadicVector], float]:
    """Nearest dyadic directions at the coarsest level with angular error ``<= eps``."""
    k = len(vectors)
    if dyadic_degree(k, 1) > MAX_POLARIZATION_DEGREE:
        raise CapacityError(f"{k} vectors exceed the polarization capacity")
    thetas = [math.atan2(float(v[1]), float(v[0])) % (2.0 * math.pi) for v in vectors]
    top = max_dyadic_level(k)
    err = math.inf
    for level in range(1, top + 1):
        snapped = [DyadicVector.nearest(t, level) for t in thetas]
        err = max(abs(math.remainder(t - s.angle, 2.0 * math.pi)) for t, s in zip(thetas, snapped))
        if err <= eps:
            return snapped, err
    raise CapacityError(f"angular tolerance {eps:g} needs a level above {top}; "
                        f"best achievable for k={k} is {err:.6g}")


def approx_witness(tuple_: Sequence, eps: float) -> AttainmentCertificate:
    """Witness for the dyadic snap of ``tuple_``, judged at ``tuple_`` itself.

    The defect is measured at the original vectors, so it reflects the
    approximation error and tends to zero with ``eps``.
    """
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    vecs = _check_units(tuple_, Field.REAL)
    if len(vecs[0]) != 2:
        raise ArgumentError("approx_witness works in R^2")
    snapped, err = snap_to_dyadic([np.asarray(v, dtype=float) for v in vecs], eps)
    dy = dyadic_witness(snapped)
    value = polarization_eval(dy.form, vecs)
    details = dict(dy.details)
    details.update({"eps": eps, "angular_error": err, "snapped_value": float(dy.value)})
    return AttainmentCertificate(dy.form, list(vecs), float(value), dy.norm_upper,
                                 float(dy.norm_upper - abs(value)), "limit",
                                 snapped_tuple=[np.asarray(s.vector, dtype=float) for s in snapped],
                                 details=details)


def as_dyadic(v, tol: float = 1e-12) -> DyadicVector | None:
    """The coarsest dyadic direction equal to ``v`` (within ``tol`` in angle), if any."""
    theta = math.atan2(float(v[1]), float(v[0])) % (2.0 * math.pi)
    for level in range(1, 12):
        d = DyadicVector.nearest(theta, level)
        if abs(math.remainder(theta - d.angle, 2.0 * math.pi)) <= tol:
            return d
    return None


def witness_for_tuple(tuple_: Sequence, eps: float | None = None, field=None) -> AttainmentCertificate:
    """Pick a construction for an arbitrary tuple of unit vectors.

    Bilinear for ``k = 2``, rank one for collinear tuples, the dyadic
    recursion for dyadic planar tuples, ``approx_witness`` when ``eps`` is
    given and otherwise the extremal form of the symmetric projective norm
    program.  Real tuples spanning three or more dimensions and complex
    non-collinear tuples (``k >= 3``) admit no witness.
    """
    field = Field(field) if field is not None else field_of(tuple_)
    vecs = _check_units(tuple_, field)
    k = len(vecs)
    if k == 2:
        return bilinear_witness(vecs[0], vecs[1], field)
    basis, span = gram_schmidt(vecs, field=field)
    if span == 1:
        cert = collinear_witness(vecs[0], k, field)
        return _certificate(cert.form, vecs, "collinear", norm_upper=1)
    if field is Field.COMPLEX:
        raise NotAttainingError("for k >= 3 no symmetric form attains its norm at non-collinear complex vectors")
    if span > 2:
        raise NotAttainingError("for k >= 3 no symmetric form attains its norm at real vectors spanning dimension > 2")
    if len(vecs[0]) != 2:
        coords = [basis.coordinates(v) for v in vecs]
        inner_cert = witness_for_tuple(coords, eps, Field.REAL)
        form = lift(inner_cert.form, basis)
        return _certificate(form, vecs, inner_cert.construction, details=dict(inner_cert.details))
    dyadic = [as_dyadic(np.asarray(v, dtype=float)) for v in vecs]
    if all(d is not None for d in dyadic):
        level = max(d.level for d in dyadic)
        if dyadic_degree(k, level) <= MAX_POLARIZATION_DEGREE:
            return dyadic_witness(dyadic)
    if eps is not None:
        return approx_witness(vecs, eps)
    from .projective import lp_extremal_witness
    return lp_extremal_witness(vecs)
