"""Symmetric k-linear forms stored as homogeneous polynomials.

A symmetric k-linear form ``T`` on K^d is determined by its diagonal
``P(w) = T(w, ..., w)``, so forms are kept as the coefficient map
``alpha -> c_alpha`` of ``P(w) = sum_alpha c_alpha w^alpha``.  Multilinear
values are recovered by the sign-sum polarization identity; contractions
are computed on coefficients through directional derivatives,
``T(w^{k-m}, v_1, ..., v_m) = (k-m)!/k! * D_{v_1} ... D_{v_m} P(w)``.

Integer and :class:`~fractions.Fraction` inputs are evaluated exactly; any
float or complex input switches to binary64 arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError, FieldMismatchError, PreconditionError

MAX_POLARIZATION_DEGREE = 16
MAX_DIM = 4
UNIT_TOL = 1e-12
GRAM_TOL = 1e-10


class Field(str, Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128


Scalar = Any  # int | Fraction | float | complex


# ---------------------------------------------------------------------------
# scalars and vectors
# ---------------------------------------------------------------------------

def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, (bool, np.bool_))


def _normalize_scalar(c, field: Field):
    if isinstance(c, (bool, np.bool_)):
        raise ArgumentError("booleans are not scalars")
    if isinstance(c, np.integer):
        return int(c)
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, (np.floating, float)):
        return float(c)
    if isinstance(c, (np.complexfloating, complex)):
        c = complex(c)
        if field is Field.REAL:
            if c.imag != 0:
                raise FieldMismatchError(f"complex scalar {c} in a real object")
            return c.real
        return c
    raise ArgumentError(f"unsupported scalar type {type(c).__name__}")


def coerce_vector(v, field: Field, dim: int | None = None):
    """Return ``v`` as a tuple of exact scalars or as a numpy array.

    Real vectors are accepted where complex ones are expected (canonical
    embedding); the converse raises :class:`FieldMismatchError`.
    """
    if isinstance(v, np.ndarray) and v.dtype.kind in "fc":
        entries = list(v.ravel())
    else:
        entries = list(v)
    if dim is not None and len(entries) != dim:
        raise ArgumentError(f"vector of length {len(entries)} where dimension {dim} is required")
    if not entries:
        raise ArgumentError("empty vector")
    if all(_is_exact(x) for x in entries):
        return tuple(Fraction(x) if isinstance(x, Fraction) else int(x) for x in entries)
    arr = np.asarray([complex(x) if isinstance(x, Fraction) else x for x in entries])
    if arr.dtype.kind not in "iufc":
        raise ArgumentError("vector entries must be numeric")
    if field is Field.REAL:
        if arr.dtype.kind == "c":
            if np.any(arr.imag != 0):
                raise FieldMismatchError("complex vector passed to a real form")
            arr = arr.real
        return arr.astype(np.float64)
    return arr.astype(np.complex128)


def field_of(vectors: Iterable) -> Field:
    """Smallest field containing every entry of ``vectors``."""
    for v in vectors:
        for x in np.asarray(v, dtype=object).ravel():
            if isinstance(x, (complex, np.complexfloating)) and complex(x).imag != 0:
                return Field.COMPLEX
    return Field.REAL


def inner(u, v):
    """Hilbert inner product, linear in the first slot."""
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    return complex(np.sum(u * np.conj(v)))


def vector_norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=np.complex128)))


def is_unit(v, tol: float = UNIT_TOL) -> bool:
    if all(_is_exact(x) for x in v):
        return sum(Fraction(x) ** 2 for x in v) == 1
    return abs(vector_norm(v) - 1.0) <= tol


def is_parallel(x, y, tol: float = 1e-9) -> bool:
    """Angle test for collinearity of two unit vectors (``x = lambda y``)."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    residual = x - inner(x, y) * y
    return float(np.linalg.norm(residual)) <= tol


# ---------------------------------------------------------------------------
# multi-indices and polynomial dictionaries
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def multi_indices(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of length ``dim`` summing to ``degree``.

    Ordered lexicographically descending, so for ``dim=2`` the first
    entry is ``(degree, 0)``.
    """
    if dim == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in multi_indices(dim - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def multinomial(alpha: tuple[int, ...]) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = out.get(key, 0) + ca * cb
    return out


def _linear_powers(row: Sequence, max_power: int) -> list[dict]:
    """Powers 0..max_power of the linear form ``sum_j row[j] u_j``."""
    m = len(row)
    linear = {}
    for j, r in enumerate(row):
        if r != 0:
            e = [0] * m
            e[j] = 1
            linear[tuple(e)] = r
    powers = [{(0,) * m: 1}]
    for _ in range(max_power):
        powers.append(_poly_mul(powers[-1], linear))
    return powers


def linear_form_product(rows: Sequence[Sequence]) -> dict:
    """Coefficients of ``prod_i (sum_j rows[i][j] z_j)`` (no conjugation)."""
    m = len(rows[0])
    out = {(0,) * m: 1}
    for row in rows:
        out = _poly_mul(out, _linear_powers(row, 1)[1])
    return out


def _directional_derivative(coeffs: Mapping, v: Sequence) -> dict:
    out: dict = {}
    for alpha, c in coeffs.items():
        for i, a in enumerate(alpha):
            if a == 0 or v[i] == 0:
                continue
            beta = alpha[:i] + (a - 1,) + alpha[i + 1:]
            out[beta] = out.get(beta, 0) + c * a * v[i]
    return out


# ---------------------------------------------------------------------------
# symmetric forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetricForm:
    """Symmetric ``degree``-linear form on K^``dim`` given by its polynomial.

    ``coeffs`` maps exponent tuples ``alpha`` (``sum(alpha) == degree``) to
    the coefficient of ``w^alpha`` in ``P(w) = T(w, ..., w)``.  Zero
    coefficients are dropped.  Instances are immutable.
    """

    field: Field
    dim: int
    degree: int
    coeffs: Mapping[tuple[int, ...], Scalar]

    def __post_init__(self):
        field = Field(self.field)
        object.__setattr__(self, "field", field)
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ArgumentError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.dim > MAX_DIM:
            raise CapacityError(f"dimension {self.dim} exceeds the supported maximum {MAX_DIM}")
        if not isinstance(self.degree, (int, np.integer)) or self.degree < 0:
            raise ArgumentError(f"degree must be a nonnegative integer, got {self.degree!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "degree", int(self.degree))
        clean: dict = {}
        for alpha, c in dict(self.coeffs).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.dim or any(a < 0 for a in alpha) or sum(alpha) != self.degree:
                raise ArgumentError(f"multi-index {alpha} is not of length {self.dim} and order {self.degree}")
            clean[alpha] = clean.get(alpha, 0) + _normalize_scalar(c, field)
        ordered = {a: clean[a] for a in multi_indices(self.dim, self.degree) if a in clean and clean[a] != 0}
        object.__setattr__(self, "coeffs", MappingProxyType(ordered))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field, dim: int, degree: int) -> SymmetricForm:
        return cls(field, dim, degree, {})

    @classmethod
    def from_vector(cls, field, dim: int, degree: int, values) -> SymmetricForm:
        """Build from a coefficient vector ordered as :func:`multi_indices`."""
        idx = multi_indices(dim, degree)
        values = list(values)
        if len(values) != len(idx):
            raise ArgumentError(f"expected {len(idx)} coefficients, got {len(values)}")
        return cls(field, dim, degree, dict(zip(idx, values)))

    @classmethod
    def power_of_linear(cls, field, a: Sequence, degree: int) -> SymmetricForm:
        """The form whose polynomial is ``(sum_i a_i w_i)^degree``."""
        a = list(coerce_vector(a, Field(field)))
        return cls(field, len(a), degree, _linear_powers(a, degree)[degree])

    # -- views --------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, alpha: Sequence[int]) -> Scalar:
        return self.coeffs.get(tuple(alpha), 0)

    def coeff_vector(self) -> np.ndarray:
        idx = multi_indices(self.dim, self.degree)
        return np.array([complex(self.coeff(a)) if self.field is Field.COMPLEX else float(self.coeff(a))
                         for a in idx], dtype=self.field.dtype)

    def tensor(self) -> np.ndarray:
        """Full symmetric coefficient tensor of shape ``(dim,) * degree``."""
        T = np.zeros((self.dim,) * self.degree, dtype=self.field.dtype)
        for index in np.ndindex(*T.shape):
            alpha = [0] * self.dim
            for i in index:
                alpha[i] += 1
            alpha = tuple(alpha)
            c = self.coeffs.get(alpha)
            if c is not None:
                T[index] = complex(c) / multinomial(alpha) if self.field is Field.COMPLEX else float(c) / multinomial(alpha)
        return T

    def hilbert_schmidt_norm(self) -> float:
        """Frobenius norm of :meth:`tensor`; an upper bound for the sup norm."""
        total = 0.0
        for alpha, c in self.coeffs.items():
            total += abs(complex(c)) ** 2 / multinomial(alpha)
        return math.sqrt(total)

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: SymmetricForm):
        if not isinstance(other, SymmetricForm):
            raise ArgumentError("expected a SymmetricForm")
        if other.field is not self.field:
            raise FieldMismatchError("cannot combine a real and a complex form")
        if (other.dim, other.degree) != (self.dim, self.degree):
            raise ArgumentError("forms differ in dimension or degree")

    def __add__(self, other: SymmetricForm) -> SymmetricForm:
        self._check_compatible(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return SymmetricForm(self.field, self.dim, self.degree, out)

    def __neg__(self) -> SymmetricForm:
        return self.scale(-1)

    def __sub__(self, other: SymmetricForm) -> SymmetricForm:
        return self + (-other)

    def scale(self, s) -> SymmetricForm:
        s = _normalize_scalar(s, self.field)
        return SymmetricForm(self.field, self.dim, self.degree, {a: c * s for a, c in self.coeffs.items()})

    def __mul__(self, s) -> SymmetricForm:
        return self.scale(s)

    __rmul__ = __mul__

    def complexify(self) -> SymmetricForm:
        """Same coefficients read over C (the unique C-multilinear extension)."""
        return SymmetricForm(Field.COMPLEX, self.dim, self.degree, dict(self.coeffs))

    def to_float(self) -> SymmetricForm:
        cast = float if self.field is Field.REAL else complex
        return SymmetricForm(self.field, self.dim, self.degree, {a: cast(c) for a, c in self.coeffs.items()})

    def max_coeff_distance(self, other: SymmetricForm) -> float:
        self._check_compatible(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(complex(self.coeff(a)) - complex(other.coeff(a))) for a in keys), default=0.0)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        entries = []
        for alpha, c in self.coeffs.items():
            if isinstance(c, Fraction):
                c = c.numerator if c.denominator == 1 else float(c)
            z = complex(c)
            entries.append({"alpha": list(alpha),
                            "re": c if isinstance(c, int) else z.real,
                            "im": 0 if isinstance(c, int) else z.imag})
        return {"field": self.field.value, "dim": self.dim, "degree": self.degree, "coeffs": entries}

    @classmethod
    def from_dict(cls, doc: Mapping) -> SymmetricForm:
        try:
            field = Field(doc["field"])
            coeffs = {}
            for entry in doc["coeffs"]:
                re, im = entry.get("re", 0), entry.get("im", 0)
                c = complex(re, im) if im else re
                coeffs[tuple(entry["alpha"])] = c
            return cls(field, int(doc["dim"]), int(doc["degree"]), coeffs)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed form document: {exc}") from exc

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*w^{a}" for a, c in self.coeffs.items()) or "0"
        return f"SymmetricForm({self.field.value}, dim={self.dim}, degree={self.degree}: {terms})"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def monomial_matrix(points: np.ndarray, dim: int, degree: int) -> np.ndarray:
    """``M[n, j] = points[n] ** multi_indices(dim, degree)[j]``."""
    points = np.atleast_2d(points)
    exps = np.array(multi_indices(dim, degree), dtype=np.int64)
    return np.prod(points[:, None, :] ** exps[None, :, :], axis=2)


def evaluate_many(form: SymmetricForm, points: np.ndarray) -> np.ndarray:
    """Vectorized ``P(w)`` for the rows of ``points``."""
    return monomial_matrix(np.asarray(points), form.dim, form.degree) @ form.coeff_vector()


def _prepare_args(form: SymmetricForm, args: Sequence) -> list:
    return [coerce_vector(v, form.field, form.dim) for v in args]


def diagonal_eval(form: SymmetricForm, w) -> Scalar:
    """``P(w) = T(w, ..., w)`` by direct monomial evaluation."""
    (w,) = _prepare_args(form, [w])
    if form.is_exact and isinstance(w, tuple):
        total = 0
        for alpha, c in form.coeffs.items():
            term = c
            for x, a in zip(w, alpha):
                term *= x ** a
            total += term
        return total
    value = evaluate_many(form, w[None, :])[0]
    return float(value) if form.field is Field.REAL else complex(value)


@lru_cache(maxsize=None)
def _sign_patterns(k: int) -> np.ndarray:
    """Sign vectors with first entry +1 (the other half mirrors them)."""
    tail = np.array(list(product((1, -1), repeat=k - 1)), dtype=np.float64).reshape(-1, k - 1)
    return np.hstack([np.ones((tail.shape[0], 1)), tail])


def polarization_eval(form: SymmetricForm, args: Sequence) -> Scalar:
    """Multilinear value ``T(v_1, ..., v_k)`` via the polarization identity.

    ``T(v_1..v_k) = 1/(2^k k!) sum_{eps in {+-1}^k} eps_1...eps_k P(sum eps_i v_i)``.
    The ``eps`` and ``-eps`` terms coincide, so only ``eps_1 = +1`` is summed.
    Exact inputs give an exact result.
    """
    k = form.degree
    if len(args) != k:
        raise ArgumentError(f"a degree-{k} form takes {k} arguments, got {len(args)}")
    if k > MAX_POLARIZATION_DEGREE:
        raise CapacityError(f"polarization of degree {k} exceeds the cap {MAX_POLARIZATION_DEGREE}")
    vecs = _prepare_args(form, args)
    if k == 0:
        return form.coeff(())
    if form.is_exact and all(isinstance(v, tuple) for v in vecs):
        total = 0
        for signs in product((1, -1), repeat=k - 1):
            signs = (1,) + signs
            point = [sum(s * v[i] for s, v in zip(signs, vecs)) for i in range(form.dim)]
            sgn = math.prod(signs)
            total += sgn * diagonal_eval(form, point)
        return Fraction(total, 2 ** (k - 1) * math.factorial(k))
    V = np.array([np.asarray(v, dtype=np.complex128) for v in vecs])
    if form.field is Field.REAL:
        V = V.real
    S = _sign_patterns(k)
    values = evaluate_many(form, S @ V)
    total = np.prod(S, axis=1) @ values / (2 ** (k - 1) * math.factorial(k))
    return float(total) if form.field is Field.REAL else complex(total)


def contract(form: SymmetricForm, fixed: Sequence) -> SymmetricForm:
    """Fix the last ``m`` slots: ``S(w_1..w_{k-m}) = T(w_1..w_{k-m}, fixed...)``."""
    m = len(fixed)
    if m >= form.degree:
        raise ArgumentError(f"cannot fix {m} slots of a degree-{form.degree} form")
    coeffs: Mapping = form.coeffs
    for v in _prepare_args(form, fixed):
        coeffs = _directional_derivative(coeffs, list(v))
    k = form.degree
    factor = Fraction(math.factorial(k - m), math.factorial(k))
    exact = all(_is_exact(c) for c in coeffs.values())
    scale = factor if exact else float(factor)
    return SymmetricForm(form.field, form.dim, k - m, {a: c * scale for a, c in coeffs.items()})


def multilinear_eval(form: SymmetricForm, args: Sequence) -> Scalar:
    """``T(v_1..v_k)`` by repeated differentiation; no degree cap."""
    k = form.degree
    if len(args) != k:
        raise ArgumentError(f"a degree-{k} form takes {k} arguments, got {len(args)}")
    if k == 0:
        return form.coeff(())
    head = contract(form, list(args[1:]))
    v = _prepare_args(form, [args[0]])[0]
    return sum(head.coeff(tuple(int(i == j) for i in range(form.dim))) * v[j] for j in range(form.dim))


def compose_linear(form: SymmetricForm, matrix, field=None) -> SymmetricForm:
    """The form ``u -> P(M u)`` for a ``dim x m`` matrix ``M``."""
    rows = [list(r) for r in (matrix.tolist() if isinstance(matrix, np.ndarray) else matrix)]
    if len(rows) != form.dim:
        raise ArgumentError(f"matrix has {len(rows)} rows, form dimension is {form.dim}")
    field = Field(field) if field is not None else form.field
    if field is Field.REAL and field_of([rows]) is Field.COMPLEX:
        raise FieldMismatchError("complex substitution into a real form")
    if field is Field.REAL:
        rows = [[r.real if isinstance(r, complex) else r for r in row] for row in rows]
    m = len(rows[0])
    k = form.degree
    powers = [_linear_powers(row, k) for row in rows]
    out: dict = {}
    for alpha, c in form.coeffs.items():
        term = {(0,) * m: c}
        for i, a in enumerate(alpha):
            if a:
                term = _poly_mul(term, powers[i][a])
        for key, val in term.items():
            out[key] = out.get(key, 0) + val
    return SymmetricForm(field, m, k, out)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal vectors ``b_1..b_m`` in K^d (Gram defect at most 1e-10)."""

    field: Field
    vectors: tuple

    def __post_init__(self):
        field = Field(self.field)
        object.__setattr__(self, "field", field)
        vecs = tuple(coerce_vector(v, field) for v in self.vectors)
        if vecs and len({len(v) for v in vecs}) != 1:
            raise ArgumentError("basis vectors differ in length")
        object.__setattr__(self, "vectors", vecs)
        if vecs and self.gram_defect() > GRAM_TOL:
            raise PreconditionError(f"basis is not orthonormal (Gram defect {self.gram_defect():.3e})")

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def ambient_dim(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the basis vectors."""
        M = np.array([np.asarray(v, dtype=np.complex128) for v in self.vectors]).T
        return M.real.copy() if self.field is Field.REAL else M

    def gram_defect(self) -> float:
        M = self.matrix
        return float(np.max(np.abs(M.conj().T @ M - np.eye(self.rank))))

    def coordinates(self, v) -> np.ndarray:
        """``[<v, b_j>]_j``; equals the coefficients of ``v`` if ``v`` is in the span."""
        c = self.matrix.conj().T @ np.asarray(v, dtype=np.complex128)
        return c.real.copy() if self.field is Field.REAL else c

    def projector_form_matrix(self) -> np.ndarray:
        """``m x d`` matrix sending ``w`` to its coordinates (for lifting forms)."""
        return self.matrix.conj().T


def gram_schmidt(vectors: Sequence, tol: float = 1e-9, field=None) -> tuple[OrthonormalBasis, int]:
    """Orthonormal basis of ``span(vectors)`` and its dimension.

    Modified Gram-Schmidt with one reorthogonalization pass; a vector whose
    residual norm falls below ``tol`` (relative to its own norm) counts as
    dependent.
    """
    if not vectors:
        raise ArgumentError("gram_schmidt needs at least one vector")
    field = Field(field) if field is not None else field_of(vectors)
    arrs = [np.asarray(coerce_vector(v, field), dtype=np.complex128) for v in vectors]
    basis: list[np.ndarray] = []
    for v in arrs:
        scale = max(1.0, float(np.linalg.norm(v)))
        r = v.copy()
        for _ in range(2):
            for b in basis:
                r = r - np.vdot(b, r) * b
        n = float(np.linalg.norm(r))
        if n > tol * scale:
            basis.append(r / n)
    if field is Field.REAL:
        basis = [b.real for b in basis]
    return OrthonormalBasis(field, tuple(basis)), len(basis)


def restrict(form: SymmetricForm, basis: OrthonormalBasis) -> SymmetricForm:
    """Restriction to ``span(basis)`` in basis coordinates: ``u -> P(sum u_i b_i)``."""
    if basis.ambient_dim != form.dim:
        raise ArgumentError("basis vectors do not live in the form's space")
    if basis.field is Field.COMPLEX and form.field is Field.REAL:
        raise FieldMismatchError("complex basis for a real form")
    if basis.gram_defect() > GRAM_TOL:
        raise PreconditionError("basis is not orthonormal")
    if all(isinstance(v, tuple) for v in basis.vectors):
        rows = [[v[i] for v in basis.vectors] for i in range(form.dim)]
        return compose_linear(form, rows)
    return compose_linear(form, basis.matrix)


def lift(form: SymmetricForm, basis: OrthonormalBasis) -> SymmetricForm:
    """Extend a form on span coordinates to K^d through the orthogonal projection."""
    if form.dim != basis.rank:
        raise ArgumentError("form dimension does not match the basis size")
    M = basis.projector_form_matrix()
    if basis.field is Field.REAL:
        M = M.real
    field = Field.COMPLEX if (form.field is Field.COMPLEX or basis.field is Field.COMPLEX) else Field.REAL
    return compose_linear(form if form.field is field else form.complexify(), M, field)


# ---------------------------------------------------------------------------
# elementary tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ElementaryTensor:
    """The symmetric tensor ``x_1 v ... v x_k`` given by unit factors."""

    field: Field
    factors: tuple

    def __post_init__(self):
        field = Field(self.field)
        object.__setattr__(self, "field", field)
        if not self.factors:
            raise ArgumentError("an elementary tensor needs at least one factor")
        facs = tuple(coerce_vector(v, field) for v in self.factors)
        if len({len(v) for v in facs}) != 1:
            raise ArgumentError("factors differ in dimension")
        for v in facs:
            if not is_unit(v):
                raise PreconditionError(f"factor {v} is not a unit vector")
        object.__setattr__(self, "factors", facs)

    @property
    def degree(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return len(self.factors[0])
