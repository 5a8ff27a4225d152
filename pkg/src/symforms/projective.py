"""Symmetric projective norm of elementary tensors as a linear program.

For unit vectors ``x_1, ..., x_k``,
``pi_s(x_1 v ... v x_k) = max |T(x_1, ..., x_k)|`` over symmetric forms of
norm one.  Both sides only depend on the span of the ``x_i`` (a form on
the span extends through the orthogonal projection with the same norm),
so the program lives on span coordinates ``u_i``.  Writing the associated
polynomial as ``p_t(w) = sum_a t_a w^a``, the objective
``T_t(u_1, ..., u_k)`` is linear in ``t`` and the unit ball is cut out by
``|p_t(w)| <= 1`` for unit ``w``.

The constraint is imposed on a sphere grid (complex moduli through a
regular polygon of half planes), and the relaxation is then tightened by
exchange rounds: the true maximizers of the current extremal polynomial
are added as constraints.  Every LP value bounds ``pi_s`` from above;
every extremal form divided by its recomputed sup norm bounds it from
below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (ArgumentError, CapacityError, InternalError, NotAttainingError,
                     PreconditionError)
from .forms import (ElementaryTensor, Field, OrthonormalBasis, SymmetricForm, coerce_vector,
                    field_of, gram_schmidt, evaluate_many, is_unit, lift, linear_form_product,
                    monomial_matrix,
                    multi_indices, polarization_eval)
from .grids import SphereGrid, circle_grid, complex_sphere_grid, make_grid, real_sphere_grid
from .norms import real_2d_local_maxima, form_norm, sup_norm_complex_2d, sup_norm_real_2d, sup_norm_sphere
from .simplex import solve_lp

MAX_PIS_DEGREE = 6
MAX_PIS_DEGREE_PLANE = 16
UNIQUENESS_TOL = 1e-6


@dataclass
class PisResult:
    value: float
    extremal_form: SymmetricForm
    grid: SphereGrid | None
    certified_upper: float
    certified_lower: float
    span_dim: int = 0
    history: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"value": self.value, "certified_lower": self.certified_lower,
                "certified_upper": self.certified_upper, "span_dim": self.span_dim,
                "grid": self.grid.to_dict() if self.grid is not None else None,
                "extremal_form": self.extremal_form.to_dict(), "history": self.history}


# ---------------------------------------------------------------------------
# span reduction
# ---------------------------------------------------------------------------

def _span_frame(vectors, field: Field):
    """``(basis or None, coordinates, span_dim)``; ``None`` when the span is everything."""
    basis, span = gram_schmidt(vectors, field=field)
    d = len(vectors[0])
    if span == d:
        coords = [np.asarray(v, dtype=field.dtype) for v in vectors]
        return None, coords, span
    return basis, [basis.coordinates(v) for v in vectors], span


def monomial_polarization_values(coords: Sequence, field: Field, exact: bool = False) -> dict:
    """``T_{w^a}(u_1, ..., u_k)`` for every multi-index ``a``.

    With ``prod_s (u_s . z) = sum_a m_a z^a`` the value is ``m_a a!/k!``.
    ``exact=True`` keeps the entries of ``coords`` (e.g. Fractions) as given.
    """
    k = len(coords)
    rows = [list(u) for u in coords] if exact else [np.asarray(u, dtype=field.dtype) for u in coords]
    prod = linear_form_product(rows)
    out = {}
    for alpha, m in prod.items():
        fact = 1
        for a in alpha:
            fact *= factorial(a)
        out[alpha] = Fraction(m * fact, factorial(k)) if exact else m * fact / factorial(k)
    return out


def _check_capacity(field: Field, m: int, k: int):
    if field is Field.COMPLEX and m > 2:
        raise CapacityError("complex projective norms are supported on spans of dimension <= 2")
    if field is Field.REAL and m > 3:
        raise CapacityError("real projective norms are supported on spans of dimension <= 3")
    cap = MAX_PIS_DEGREE_PLANE if (field is Field.REAL and m <= 2) else MAX_PIS_DEGREE
    if k > cap:
        raise CapacityError(f"degree {k} exceeds the projective-norm capacity {cap}")


def _default_grid(field: Field, m: int, k: int) -> SphereGrid:
    if field is Field.REAL and m == 2:
        return circle_grid(max(256, 32 * k))
    if field is Field.REAL:
        return real_sphere_grid(16)
    return complex_sphere_grid(8)


class _SpanLP:
    """Coefficient LP for a fixed tuple on span coordinates ``K^m``."""

    def __init__(self, coords, field: Field, polygon: int = 32):
        self.coords = coords
        self.field = field
        self.k = len(coords)
        self.m = len(coords[0])
        self.polygon = polygon
        self.monomials = multi_indices(self.m, self.k)
        mono = monomial_polarization_values(coords, field)
        vals = np.array([complex(mono.get(a, 0.0)) for a in self.monomials])
        if field is Field.REAL:
            self.objective = vals.real.copy()
        else:
            self.objective = np.concatenate([vals.real, -vals.imag])
        self.grid_rows = np.zeros((0, self.nvar))
        self.cut_rows = np.zeros((0, self.nvar))
        self.cut_points = np.zeros((0, self.m), dtype=field.dtype)

    @property
    def nvar(self) -> int:
        n = len(self.monomials)
        return n if self.field is Field.REAL else 2 * n

    def _point_rows(self, points: np.ndarray) -> np.ndarray:
        return monomial_matrix(np.asarray(points, dtype=self.field.dtype), self.m, self.k)

    @property
    def rows(self) -> np.ndarray:
        return np.vstack([self.grid_rows, self.cut_rows])

    def set_grid(self, grid: SphereGrid):
        V = self._point_rows(grid.nodes)
        if self.field is Field.REAL:
            self.grid_rows = np.vstack([V, -V])
        else:
            omega = np.exp(2j * np.pi * np.arange(self.polygon) / self.polygon)
            W = (omega[:, None, None] * V[None, :, :]).reshape(-1, V.shape[1])
            self.grid_rows = np.hstack([W.real, -W.imag])

    def add_cuts(self, points, phases):
        """Tangent cuts ``Re(conj(phase) p_t(w)) <= 1``."""
        if not len(points):
            return
        W = np.conj(np.asarray(phases))[:, None] * self._point_rows(np.array(points))
        new = W.real if self.field is Field.REAL else np.hstack([W.real, -W.imag])
        self.cut_rows = np.vstack([self.cut_rows, new])
        self.cut_points = np.vstack([self.cut_points, np.asarray(points, dtype=self.field.dtype)])

    def form(self, t: np.ndarray) -> SymmetricForm:
        n = len(self.monomials)
        if self.field is Field.REAL:
            coeffs = dict(zip(self.monomials, (float(x) for x in t)))
        else:
            coeffs = dict(zip(self.monomials, (complex(a, b) for a, b in zip(t[:n], t[n:]))))
        return SymmetricForm(self.field, self.m, self.k, coeffs)

    def solve(self, objective, band=None, tol: float = 1e-13):
        """Maximize ``objective.t``; ``band = (lo, hi)`` adds ``lo <= Re T_t(x) <= hi``."""
        A, b = self.rows, np.ones(len(self.rows))
        if band is not None:
            lo, hi = band
            A = np.vstack([A, self.objective, -self.objective])
            b = np.concatenate([b, [hi, -lo]])
        res = solve_lp(objective, A, b, tol=tol)
        if res.status != "optimal":
            raise InternalError(f"coefficient LP is {res.status}; the constraints should bound it")
        return res

    def norm(self, form: SymmetricForm):
        if self.m == 2 and self.field is Field.REAL:
            return sup_norm_real_2d(form)
        if self.m == 2:
            return sup_norm_complex_2d(form)
        return sup_norm_sphere(form)

    def separate(self, form: SymmetricForm, nres, level: float = 1.0, extra: int = 16):
        """Cut points: local maximizers and the worst probe nodes above ``level``.

        In the real plane the cuts go through every local maximum of ``|p|``
        above ``level`` instead.
        """
        f = form.to_float()
        if self.field is Field.REAL and self.m == 2:
            t = real_2d_local_maxima(f, level)
            pts = np.column_stack([np.cos(t), np.sin(t)])
            return pts, np.sign(evaluate_many(f, pts))
        probe = _probe_grid(self.field, self.m, self.k)
        vals = np.abs(evaluate_many(f, probe.nodes))
        hot = np.flatnonzero(vals > level)
        hot = hot[np.argsort(-vals[hot], kind="stable")][:extra]
        pts = np.array(list(nres.maximizers) + list(nres.local_maxima) + list(probe.nodes[hot]),
                       dtype=self.field.dtype)
        pv = evaluate_many(f, pts)
        keep = np.abs(pv) > level
        return pts[keep], pv[keep] / np.abs(pv[keep])


_PROBES: dict = {}


def _probe_grid(field: Field, m: int, k: int) -> SphereGrid:
    key = (field, m, k)
    if key not in _PROBES:
        if field is Field.REAL and m == 2:
            _PROBES[key] = circle_grid(max(512, 64 * k))
        elif field is Field.REAL:
            _PROBES[key] = real_sphere_grid(32)
        else:
            _PROBES[key] = complex_sphere_grid(16)
    return _PROBES[key]


def _solve_with_cuts(lp: _SpanLP, objective, band=None, rounds: int = 40, tol: float = 1e-11,
                     lp_tol: float = 1e-13):
    """LP solves interleaved with cutting planes until the optimizer has norm ``<= 1 + tol``.

    Yields ``(lp_result, form, norm_result)`` for every solve.
    """
    for r in range(rounds + 1):
        res = lp.solve(objective, band, lp_tol)
        form = lp.form(res.x)
        nres = lp.norm(form)
        yield res, form, nres
        if nres.value <= 1.0 + tol or r == rounds:
            return
        lp.add_cuts(*lp.separate(form, nres))


def _collinear_result(field: Field, x0, k: int) -> PisResult:
    from .witness import collinear_witness
    cert = collinear_witness(x0, k, field)
    # pi_s <= prod |x_i| = 1 and <., x_0>^k reaches 1
    return PisResult(1.0, cert.form, None, 1.0, 1.0, 1, [{"closed_form": "rank-one"}])


def pis_elementary(tensor: ElementaryTensor, grid_size: int | None = None, refine_rounds: int = 0,
                   polygon: int = 32, exchange_rounds: int = 40, gap_tol: float = 1e-10) -> PisResult:
    """``pi_s(x_1 v ... v x_k)`` with two-sided bounds.

    Parameters
    ----------
    tensor : ElementaryTensor
        Unit factors, real (span dimension <= 3) or complex (span <= 2).
    grid_size : int, optional
        Resolution of the initial sphere grid on the span.
    refine_rounds : int
        Number of grid doublings after the first solve.  Cuts are kept, so
        the upper bound never increases.
    polygon : int
        Half planes per complex node approximating ``|z| <= 1``.
    exchange_rounds : int
        Cutting-plane rounds per grid level (0 gives the plain grid LP).
    gap_tol : float
        A grid level ends early once ``upper - lower <= gap_tol``.

    ``value`` is the certified lower bound; it is attained by
    ``extremal_form`` (scaled to sup norm one, lifted to the ambient space).
    A span of dimension one is handled in closed form.
    """
    field = tensor.field
    vecs = list(tensor.factors)
    k = len(vecs)
    basis, coords, span = _span_frame(vecs, field)
    if span == 1:
        return _collinear_result(field, vecs[0], k)
    _check_capacity(field, span, k)
    grid = _default_grid(field, span, k) if grid_size is None else make_grid(field, span, grid_size)
    lp = _SpanLP(coords, field, polygon)
    upper, lower, best = math.inf, 0.0, None
    history: list = []
    for level in range(refine_rounds + 1):
        if level:
            grid = grid.refined()
        lp.set_grid(grid)
        for res, form, nres in _solve_with_cuts(lp, lp.objective, rounds=exchange_rounds):
            upper = min(upper, res.value)
            N = nres.value
            if N > 0 and res.value / N > lower:
                lower, best = res.value / N, form.scale(1.0 / N)
            history.append({"grid_resolution": grid.resolution, "lp_value": res.value,
                            "extremal_norm": N, "upper": upper, "lower": lower,
                            "constraints": int(len(lp.grid_rows) + len(lp.cut_rows))})
            if upper - lower <= gap_tol:
                break
    if best is None:
        raise InternalError("no extremal form produced")
    if basis is not None:
        best = lift(best, basis)
    return PisResult(lower, best, grid, upper, lower, span, history)


def _real_plane_tuple(tuple_):
    vecs = [coerce_vector(v, Field.REAL) for v in tuple_]
    for v in vecs:
        if not is_unit(v, 1e-10):
            raise PreconditionError("tuple entries must be unit vectors")
    basis, coords, span = _span_frame(vecs, Field.REAL)
    if span != 2:
        raise PreconditionError(f"tuple spans dimension {span}, expected 2")
    return vecs, basis, coords


@dataclass
class UniquenessResult:
    unique: bool
    forms: list
    spread: float
    rounds: int

    def to_dict(self) -> dict:
        return {"unique": self.unique, "spread": self.spread, "rounds": self.rounds,
                "forms": [f.to_dict() for f in self.forms]}


def _longdouble(x) -> np.longdouble:
    """Fraction to long double through a two-term float expansion."""
    hi = float(x)
    return np.longdouble(hi) + np.longdouble(float(Fraction(x) - Fraction(hi)))


class _PlaneRefinement:
    """The real-plane uniqueness LP re-centred at ``t1``, with data in long double.

    Along directions where the norm grows only quadratically, a constraint
    residual ``r`` moves the optimizer by about ``sqrt(r)``.  Working with
    the correction ``u = t - t1`` and right-hand sides ``1 -+ p_{t1}(w)``
    evaluated in extended precision keeps ``r`` far below double rounding.
    Every node is an exact point of the unit circle (to long double
    accuracy), so the relaxation still contains the true feasible set.
    """

    def __init__(self, coords, t1, angles, scale: float = 1e-7):
        self.k = len(coords)
        self.exps = np.array(multi_indices(2, self.k), dtype=np.int64)
        exact = [[Fraction(float(x)) for x in u] for u in coords]
        mono = monomial_polarization_values(exact, Field.REAL, exact=True)
        self.c = np.array([_longdouble(mono.get(tuple(a), 0)) for a in self.exps])
        self.t1 = np.asarray(t1, dtype=np.longdouble)
        self.ct1 = self.c @ self.t1
        self.scale = scale
        self.angles = np.zeros(0)
        self.A = np.zeros((0, len(self.exps)), dtype=np.longdouble)
        self.b = np.zeros(0, dtype=np.longdouble)
        self.add(angles)

    def _rows(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=np.longdouble)
        pts = np.column_stack([np.cos(th), np.sin(th)])
        return np.prod(pts[:, None, :] ** self.exps[None, :, :], axis=2)

    def add(self, theta) -> int:
        theta = np.asarray(theta, dtype=float) % np.pi
        if self.angles.size:
            theta = np.array([t for t in theta if np.min(np.abs(self.angles - t)) > 1e-15])
        if not theta.size:
            return 0
        V = self._rows(theta)
        pv = V @ self.t1
        self.A = np.vstack([self.A, V, -V])
        self.b = np.concatenate([self.b, 1 - pv, 1 + pv])
        self.angles = np.concatenate([self.angles, theta])
        return len(theta)

    def solve(self, i: int, sign: float, slack: float) -> np.ndarray:
        obj = np.zeros(len(self.exps))
        obj[i] = sign
        A = np.vstack([self.A, self.c[None, :], -self.c[None, :]]).astype(float)
        hi = (1 - self.ct1) / self.scale
        lo = (1 - np.longdouble(slack) - self.ct1) / self.scale
        b = np.concatenate([self.b / self.scale, [hi, -lo]]).astype(float)
        res = solve_lp(obj, A, b, tol=1e-12)
        if res.status != "optimal":
            raise InternalError(f"refined uniqueness LP is {res.status}")
        return np.asarray(res.x, dtype=np.longdouble) * self.scale

    def violated(self, theta, u) -> np.ndarray:
        vals = self._rows(theta) @ (self.t1 + u)
        return np.asarray(theta)[np.abs(vals) > 1]


def uniqueness_on_span(tuple_: Sequence, tol: float = UNIQUENESS_TOL, grid_size: int | None = None,
                       max_rounds: int = 60) -> UniquenessResult:
    """Decide whether the norm-one forms with ``T(x_1, ..., x_k) = 1`` agree on the span.

    For every coefficient of the restricted form, the LP relaxation is
    maximized and minimized under ``T(x) = 1`` with cutting planes at the
    local maxima of the optimizers.  The relaxation contains the true
    feasible set, so a spread (largest max-min gap) below ``tol`` proves
    uniqueness.  A double precision pass locates the answer; a second pass
    re-centred there, with long double data, tightens the spread.  Returns
    the common form (lifted to the ambient space) or two feasible forms
    that differ.
    """
    vecs, basis, coords = _real_plane_tuple(tuple_)
    k = len(vecs)
    _check_capacity(Field.REAL, 2, k)
    pis = pis_elementary(ElementaryTensor(Field.REAL, tuple(vecs)), grid_size)
    if pis.value < 1.0 - tol:
        raise NotAttainingError(f"pi_s = {pis.value:.9f} < 1: no norm-one form attains at this tuple")
    grid = _default_grid(Field.REAL, 2, k) if grid_size is None else circle_grid(grid_size)
    lp = _SpanLP(coords, Field.REAL)
    lp.set_grid(grid)
    band = (1.0 - 1e-12, 1.0)
    total = 0
    coarse = []
    for i in range(lp.nvar):
        for sgn in (1.0, -1.0):
            obj = np.zeros(lp.nvar)
            obj[i] = sgn
            for res, _, _ in _solve_with_cuts(lp, obj, band, max_rounds, 1e-12):
                total += 1
            coarse.append(res.x)
    t1 = np.mean(coarse, axis=0)
    cut_angles = np.arctan2(lp.cut_points[:, 1], lp.cut_points[:, 0]) if len(lp.cut_points) else []
    ref = _PlaneRefinement(coords, t1, np.concatenate([grid.params["angles"], cut_angles]))
    slack = 1e-18
    for _ in range(max_rounds):
        try:
            extremes = [(ref.solve(i, 1.0, slack), ref.solve(i, -1.0, slack)) for i in range(lp.nvar)]
        except InternalError:
            # rounding can empty a relaxation that has shrunk to a point
            if slack >= 1e-13:
                raise
            slack *= 10.0
            continue
        total += 1
        spread = float(max(hi[i] - lo[i] for i, (hi, lo) in enumerate(extremes)))
        if spread <= 0.1 * tol:
            break
        fresh = []
        for pair in extremes:
            for u in pair:
                form = lp.form((ref.t1 + u).astype(float))
                fresh.extend(ref.violated(real_2d_local_maxima(form, 1.0 - 1e-9), u))
        if not ref.add(fresh):
            break
    spreads = [float(hi[i] - lo[i]) for i, (hi, lo) in enumerate(extremes)]
    spread = max(spreads)
    j = int(np.argmax(spreads))
    if spread <= tol:
        u = np.mean([u for pair in extremes for u in pair], axis=0)
        forms = [lp.form((ref.t1 + u).astype(float))]
    else:
        forms = [lp.form((ref.t1 + u).astype(float)) for u in extremes[j]]
    if basis is not None:
        forms = [lift(f, basis) for f in forms]
    return UniquenessResult(spread <= tol, forms, spread, total)


def _check_attains(T: SymmetricForm, vecs, tol: float = 1e-8):
    N = form_norm(T).value
    if abs(N - 1.0) > tol:
        raise PreconditionError(f"form has norm {N}, expected 1")
    value = complex(polarization_eval(T, vecs))
    if N - abs(value) > tol:
        raise NotAttainingError(f"form does not attain its norm at the tuple (defect {N - abs(value):.3e})")
    return value


def exposedness_check(T: SymmetricForm, tuple_: Sequence, tol: float = UNIQUENESS_TOL) -> bool:
    """True when ``sign(T(x)) x_1 v ... v x_k`` exposes ``T`` in the unit ball.

    Requires a real form on R^2 with norm one that attains at a tuple
    spanning R^2; the answer is uniqueness on the span plus agreement of
    the unique form with ``sign(T(x)) T``.
    """
    if T.field is not Field.REAL or T.dim != 2:
        raise PreconditionError("exposedness_check works with real forms on R^2")
    vecs, _, _ = _real_plane_tuple(tuple_)
    if len(vecs) != T.degree:
        raise ArgumentError("tuple length differs from the form's degree")
    value = _check_attains(T, vecs)
    result = uniqueness_on_span(vecs, tol)
    if not result.unique:
        return False
    target = T.to_float().scale(1.0 if value.real >= 0 else -1.0)
    return result.forms[0].max_coeff_distance(target) <= tol


class ComplexificationGap(NamedTuple):
    real_norm: float
    complex_norm: float

    @property
    def margin(self) -> float:
        return self.complex_norm - self.real_norm


def complexification_gap(T: SymmetricForm, tuple_: Sequence) -> ComplexificationGap:
    """Sup norms of ``T`` on the real and on the complex sphere of the plane.

    ``T`` must attain its norm at a tuple spanning R^2; the complexified
    form uses the same coefficients.
    """
    if T.field is not Field.REAL or T.dim != 2:
        raise PreconditionError("complexification_gap works with real forms on R^2")
    vecs, _, _ = _real_plane_tuple(tuple_)
    if len(vecs) != T.degree:
        raise ArgumentError("tuple length differs from the form's degree")
    N = sup_norm_real_2d(T).value
    value = abs(complex(polarization_eval(T, vecs)))
    if N - value > 1e-8:
        raise NotAttainingError(f"form does not attain its norm at the tuple (defect {N - value:.3e})")
    return ComplexificationGap(N, sup_norm_complex_2d(T.complexify()).value)


def lp_extremal_witness(tuple_: Sequence):
    """Witness from the extremal form of ``pi_s``, for real tuples spanning a plane."""
    from .witness import AttainmentCertificate
    vecs = [coerce_vector(v, Field.REAL) for v in tuple_]
    pis = pis_elementary(ElementaryTensor(Field.REAL, tuple(vecs)))
    T = pis.extremal_form
    value = polarization_eval(T, vecs)
    if pis.value < 1.0 - 1e-6:
        raise NotAttainingError(f"pi_s = {pis.value:.9f} < 1")
    N = form_norm(T).value
    return AttainmentCertificate(T, vecs, float(value), N, float(N - abs(value)), "lp-extremal",
                                 details={"pis_lower": pis.certified_lower,
                                          "pis_upper": pis.certified_upper})
