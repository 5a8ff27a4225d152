"""Sup norms of homogeneous polynomials on real and complex spheres.

By the polarization isometry on Hilbert spaces, the norm of a symmetric
form equals ``sup |P(w)|`` over unit ``w``.  The engines here compute that
supremum together with certified bounds; :func:`multilinear_norm_bruteforce`
maximizes the multilinear form directly and serves as the independent
oracle for the isometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import (ArgumentError, CapacityError, GridTooCoarseError, PreconditionError,
                     UnsupportedError)
from .forms import (Field, SymmetricForm, _directional_derivative, coerce_vector, evaluate_many,
                    is_unit, multi_indices, polarization_eval)
from .grids import SphereGrid, complex_sphere_grid, real_sphere_grid


@dataclass
class NormResult:
    value: float
    maximizers: list = dc_field(default_factory=list)
    certified_upper: float = 0.0
    certified_lower: float = 0.0
    method: str = ""
    # every refined local maximizer, including those below ``value``
    local_maxima: list = dc_field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"value": self.value, "lower": self.certified_lower, "upper": self.certified_upper,
                "method": self.method,
                "maximizers": [_vector_json(w) for w in self.maximizers]}


def _vector_json(w) -> list:
    w = np.asarray(w)
    if np.iscomplexobj(w):
        return [{"re": float(z.real), "im": float(z.imag)} for z in w]
    return [float(x) for x in w]


def _zero_result(method: str) -> NormResult:
    return NormResult(0.0, [], 0.0, 0.0, method)


def _gradient_forms(form: SymmetricForm) -> list[SymmetricForm]:
    """Partial derivatives ``dP/dw_i`` as degree ``k-1`` forms."""
    out = []
    for i in range(form.dim):
        e = [0] * form.dim
        e[i] = 1
        out.append(SymmetricForm(form.field, form.dim, form.degree - 1,
                                 _directional_derivative(form.to_float().coeffs, e)))
    return out


# ---------------------------------------------------------------------------
# real circle
# ---------------------------------------------------------------------------

def _circle_functions(form: SymmetricForm):
    f = form.to_float()
    d1, d2 = _gradient_forms(f)

    def p_of(t):
        t = np.atleast_1d(t)
        return evaluate_many(f, np.column_stack([np.cos(t), np.sin(t)]))

    def dp_of(t):
        t = np.atleast_1d(t)
        pts = np.column_stack([np.cos(t), np.sin(t)])
        return -np.sin(t) * evaluate_many(d1, pts) + np.cos(t) * evaluate_many(d2, pts)

    return p_of, dp_of


def _critical_angles(dp_of, ts: np.ndarray) -> np.ndarray:
    """Zeros of ``p'`` bracketed by sign changes between consecutive samples."""
    dps = dp_of(ts)
    nxt = np.roll(dps, -1)
    step = ts[1] - ts[0]
    roots = []
    g = lambda t: float(dp_of(t)[0])
    for j in np.nonzero(dps * nxt < 0)[0]:
        a, b = ts[j], ts[j] + step
        fa, fb = g(a), g(b)
        if fa * fb > 0:
            # the batch and scalar evaluations disagree in sign at a near-zero end
            root = a if abs(fa) <= abs(fb) else b
        elif fa == 0.0 or fb == 0.0:
            root = a if fa == 0.0 else b
        else:
            root = brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        roots.append(root % (2.0 * np.pi))
    return np.array(roots)


def real_2d_local_maxima(form: SymmetricForm, floor: float, samples: int | None = None) -> np.ndarray:
    """Angles in ``[0, pi)`` of the local maxima of ``|P(cos t, sin t)|`` reaching ``floor``."""
    k = form.degree
    M = samples if samples is not None else max(256, 64 * k)
    p_of, dp_of = _circle_functions(form)
    ts = 2.0 * np.pi * np.arange(M) / M
    roots = _critical_angles(dp_of, ts)
    ap = np.abs(p_of(ts))
    peaks = ts[(ap >= np.roll(ap, 1)) & (ap >= np.roll(ap, -1))]
    if roots.size:
        # sample peaks only matter where p' vanishes exactly on a sample
        gap = np.abs(np.remainder(peaks[:, None] - roots[None, :] + np.pi, 2.0 * np.pi) - np.pi)
        peaks = peaks[gap.min(axis=1) > ts[1]]
    cand = np.concatenate([roots, peaks])
    cand = np.sort(cand[np.abs(p_of(cand)) >= floor] % np.pi)
    out = []
    for t in cand:
        if not out or t - out[-1] > 1e-9:
            out.append(t)
    if len(out) > 1 and out[0] + np.pi - out[-1] <= 1e-9:
        out.pop()
    return np.array(out)


def sup_norm_real_2d(form: SymmetricForm, samples: int | None = None) -> NormResult:
    """Sup of ``|P(cos t, sin t)|`` by enumerating the critical points of ``p``.

    ``p(t) = P(cos t, sin t)`` is a trigonometric polynomial of degree ``k``,
    so ``p'`` has at most ``2k`` zeros.  ``p'`` is sampled on ``samples``
    equispaced angles (at least ``8k``), every sign change is bisected, and
    ``value`` is the largest ``|p|`` over the critical points and samples.

    The upper bound uses Bernstein's inequality ``sup|p'| <= k sup|p|``:
    once directly, and once for ``p'`` itself (``sup|p''| <= k^2 sup|p|``)
    around the true maximizer, where ``p'`` vanishes.  Both give
    ``sup|p| <= m / (1 - c)`` with ``m`` the largest sampled ``|p|`` and
    ``c = k h / 2`` resp. ``k^2 h^2 / 8`` for the mesh width ``h``.
    """
    if form.field is not Field.REAL or form.dim != 2:
        raise UnsupportedError("sup_norm_real_2d needs a real form on R^2")
    k = form.degree
    if form.is_zero:
        return _zero_result("real-critical-points")
    if k == 0:
        c = abs(float(form.coeff((0, 0))))
        return NormResult(c, [np.array([1.0, 0.0])], c, c, "real-critical-points")
    M = max(8 * k, samples if samples is not None else max(256, 64 * k))
    p_of, dp_of = _circle_functions(form)
    ts = 2.0 * np.pi * np.arange(M) / M
    ps = p_of(ts)
    cand = np.concatenate([ts, _critical_angles(dp_of, ts)])
    vals = np.abs(p_of(cand))
    value = float(np.max(vals))

    h = 2.0 * np.pi / M
    m_s = float(np.max(np.abs(ps)))
    bounds = []
    for c in (k * h / 2.0, k * k * h * h / 8.0):
        if c < 1.0:
            bounds.append(m_s / (1.0 - c))
    upper = max(value, min(bounds))

    keep = np.nonzero(vals >= value - 1e-12 * max(1.0, value))[0]
    keep = keep[np.argsort(cand[keep], kind="stable")]
    clusters: list[list[int]] = []
    for j in keep:
        if clusters and cand[j] - cand[clusters[-1][-1]] < 1e-9:
            clusters[-1].append(j)
        else:
            clusters.append([j])
    if len(clusters) > 1 and cand[clusters[0][0]] + 2.0 * np.pi - cand[clusters[-1][-1]] < 1e-9:
        clusters[0].extend(clusters.pop())
    maximizers = []
    for cl in clusters:
        t = cand[max(cl, key=lambda j: vals[j])]
        maximizers.append(np.array([math.cos(t), math.sin(t)]))
    return NormResult(value, maximizers, upper, value, "real-critical-points")


# ---------------------------------------------------------------------------
# complex sphere in C^2
# ---------------------------------------------------------------------------

def _torus_point(theta, phi) -> np.ndarray:
    theta = np.atleast_1d(theta)
    phi = np.atleast_1d(phi)
    return np.column_stack([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])


def canonical_phase(w) -> np.ndarray:
    """Multiply by a unimodular scalar so the first nonzero entry is real >= 0."""
    w = np.asarray(w, dtype=np.complex128)
    for z in w:
        if abs(z) > 1e-14:
            return w * (abs(z) / z)
    return w


def sup_norm_complex_2d(form: SymmetricForm, grid: SphereGrid | int | None = None,
                        refine_top: int = 6, min_iterations: int = 30) -> NormResult:
    """Sup of ``|P|`` on the unit sphere of C^2.

    Points are ``w = (cos t, e^{i s} sin t)``, ``t`` in ``[0, pi/2]``.  The
    best grid nodes are refined by coordinate ascent on ``(t, s)`` with step
    halving.  Since ``|P(u) - P(v)| <= k ||P|| ||u - v||`` on the unit ball,
    ``||P|| <= m / (1 - k r)`` with ``m`` the grid maximum and ``r`` the
    covering radius.
    """
    if form.field is not Field.COMPLEX or form.dim != 2:
        raise UnsupportedError("sup_norm_complex_2d needs a complex form on C^2")
    k = form.degree
    if grid is None:
        grid = complex_sphere_grid(max(8, 4 * k))
    elif isinstance(grid, int):
        grid = complex_sphere_grid(grid)
    if grid.field is not Field.COMPLEX or grid.dim != 2:
        raise ArgumentError("grid does not discretize the sphere of C^2")
    r = grid.covering_radius
    if k * r >= 1.0:
        raise GridTooCoarseError(f"k * covering_radius = {k * r:.3f} >= 1; refine the grid")
    if form.is_zero:
        return _zero_result("complex-grid")
    f = form.to_float()
    vals = np.abs(evaluate_many(f, grid.nodes))
    m_grid = float(np.max(vals))
    upper_grid = m_grid / (1.0 - k * r)

    def objective(theta, phi):
        return np.abs(evaluate_many(f, _torus_point(theta, phi)))

    angles = grid.params["angles"]
    dtheta, dphi = grid.params["dtheta"], grid.params["dphi"]
    order = np.argsort(-vals, kind="stable")
    starts, seen = [], []
    for idx in order:
        w = grid.nodes[idx]
        if any(np.linalg.norm(w - s) < 2 * r for s in seen):
            continue
        seen.append(w)
        starts.append(angles[idx])
        if len(starts) >= refine_top:
            break

    refined = []
    for theta, phi in starts:
        best = float(objective(theta, phi)[0])
        ht, hp = dtheta, dphi
        it = 0
        while it < 400 and (it < min_iterations or max(ht, hp) > 1e-13):
            it += 1
            cand_t = np.clip(np.array([theta + ht, theta - ht, theta, theta]), 0.0, 0.5 * np.pi)
            cand_p = np.array([phi, phi, phi + hp, phi - hp])
            cv = objective(cand_t, cand_p)
            j = int(np.argmax(cv))
            if cv[j] > best:
                best, theta, phi = float(cv[j]), float(cand_t[j]), float(cand_p[j])
            else:
                ht *= 0.5
                hp *= 0.5
        refined.append((best, theta, phi % (2.0 * np.pi)))

    value = max(max(b for b, _, _ in refined), m_grid)
    maximizers = []
    for b, theta, phi in sorted(refined, key=lambda x: (-x[0], x[1], x[2])):
        if b < value - 1e-10 * max(1.0, value):
            continue
        w = canonical_phase(_torus_point(theta, phi)[0])
        if all(np.linalg.norm(w - u) > 1e-6 for u in maximizers):
            maximizers.append(w)
    local = [_torus_point(theta, phi)[0] for _, theta, phi in refined]
    return NormResult(value, maximizers, max(upper_grid, value), value, "complex-grid", local)


# ---------------------------------------------------------------------------
# general spheres
# ---------------------------------------------------------------------------

def _local_maximize(f: SymmetricForm, grads: list[SymmetricForm], start: np.ndarray) -> tuple[float, np.ndarray]:
    """Local max of ``|P(z)|^2 / |z|^{2k}`` from ``start`` (BFGS, real coordinates)."""
    k = f.degree
    d = f.dim
    cplx = f.field is Field.COMPLEX

    def unpack(x):
        return x[:d] + 1j * x[d:] if cplx else x

    exps = np.array(multi_indices(d, k), dtype=np.int64)
    coeffs = f.coeff_vector()
    gexps = np.array(multi_indices(d, k - 1), dtype=np.int64)
    gcoeffs = np.array([gf.coeff_vector() for gf in grads])

    def fun(x):
        z = unpack(x)
        nz2 = float(np.real(np.vdot(z, z)))
        P = np.prod(z ** exps, axis=1) @ coeffs
        g = gcoeffs @ np.prod(z ** gexps, axis=1)
        val = abs(P) ** 2 / nz2 ** k
        if cplx:
            dx = 2.0 * np.real(np.conj(P) * g)
            dy = -2.0 * np.imag(np.conj(P) * g)
            grad_num = np.concatenate([dx, dy])
        else:
            grad_num = 2.0 * P * g
        grad = grad_num / nz2 ** k - 2.0 * k * abs(P) ** 2 * x / nz2 ** (k + 1)
        return -val, -grad

    x0 = np.concatenate([start.real, start.imag]) if cplx else np.asarray(start, dtype=float)
    res = minimize(fun, x0, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 500})
    z = unpack(res.x)
    z = z / np.linalg.norm(z)
    val = abs(evaluate_many(f, z[None, :])[0])
    return float(val), z


def sup_norm_sphere(form: SymmetricForm, grid: SphereGrid | int | None = None,
                    restarts: int = 24, seed: int = 0, refine_top: int = 8) -> NormResult:
    """Sup of ``|P|`` on the unit sphere of K^d for any ``d``.

    Real ``d = 3`` uses a latitude/longitude grid (certified by the same
    Lipschitz bound as the complex engine) whose best nodes seed local
    BFGS refinements.  Other cases use ``restarts`` random starts and
    report the Hilbert-Schmidt norm as the certified upper bound.
    """
    k = form.degree
    if form.is_zero:
        return _zero_result("sphere-local")
    f = form.to_float()
    grads = _gradient_forms(f) if k >= 1 else []
    starts: list[np.ndarray] = []
    upper = form.hilbert_schmidt_norm()
    method = "sphere-local"
    m_grid = 0.0
    if form.field is Field.REAL and form.dim == 3 and k >= 1:
        if grid is None:
            grid = real_sphere_grid(max(12, 4 * k))
        elif isinstance(grid, int):
            grid = real_sphere_grid(grid)
        r = grid.covering_radius
        vals = np.abs(evaluate_many(f, grid.nodes))
        m_grid = float(np.max(vals))
        if k * r < 1.0:
            upper = min(upper, m_grid / (1.0 - k * r))
        order = np.argsort(-vals, kind="stable")
        for idx in order:
            w = grid.nodes[idx]
            if any(min(np.linalg.norm(w - s), np.linalg.norm(w + s)) < 2 * r for s in starts):
                continue
            starts.append(w)
            if len(starts) >= refine_top:
                break
        method = "sphere-grid"
    rng = np.random.default_rng(seed)
    n_random = restarts if not starts else max(4, restarts // 4)
    for _ in range(n_random):
        z = rng.standard_normal(form.dim)
        if form.field is Field.COMPLEX:
            z = z + 1j * rng.standard_normal(form.dim)
        starts.append(z / np.linalg.norm(z))
    best_val, best = -1.0, None
    found = []
    for s in starts:
        if k == 0:
            val, z = abs(complex(form.coeff((0,) * form.dim))), np.asarray(s)
        else:
            val, z = _local_maximize(f, grads, np.asarray(s))
        found.append((val, z))
        if val > best_val:
            best_val, best = val, z
    value = max(best_val, m_grid)
    maximizers = []
    for val, z in found:
        if val >= value - 1e-10 * max(1.0, value):
            z = canonical_phase(z) if form.field is Field.COMPLEX else (z if z[np.argmax(np.abs(z) > 1e-14)] >= 0 else -z)
            if all(np.linalg.norm(z - u) > 1e-6 for u in maximizers):
                maximizers.append(z)
    return NormResult(value, maximizers, max(upper, value), value, method, [z for _, z in found])


# ---------------------------------------------------------------------------
# brute-force multilinear oracle
# ---------------------------------------------------------------------------

def multilinear_norm_bruteforce(form: SymmetricForm, restarts: int = 16, seed: int = 0,
                                max_sweeps: int = 500, rtol: float = 1e-12) -> NormResult:
    """Maximize ``|T(w_1, ..., w_k)|`` over k independent unit vectors.

    Block-coordinate ascent: with every slot but one fixed, ``T`` is a
    linear functional ``w -> sum_j a_j w_j`` whose maximum modulus on the
    sphere is ``|a|``, attained at ``a/|a|`` (real) or ``conj(a)/|a|``
    (complex).  Works on the full coefficient tensor, never on the diagonal.
    """
    d, k = form.dim, form.degree
    if d > 3 or k > 6:
        raise CapacityError(f"brute-force oracle supports d <= 3, k <= 6 (got d={d}, k={k})")
    if form.is_zero:
        return _zero_result("multilinear-bca")
    if k == 0:
        c = abs(complex(form.coeff((0,) * d)))
        return NormResult(c, [], c, c, "multilinear-bca")
    T = form.tensor()
    cplx = form.field is Field.COMPLEX
    rng = np.random.default_rng(seed)
    best_val, best_tuple = -1.0, None
    for _ in range(restarts):
        ws = []
        for _ in range(k):
            z = rng.standard_normal(d)
            if cplx:
                z = z + 1j * rng.standard_normal(d)
            ws.append(z / np.linalg.norm(z))
        val = 0.0
        for _ in range(max_sweeps):
            old = val
            for s in range(k):
                a = T
                for t in range(k):
                    if t != s:
                        a = a @ ws[t]
                na = float(np.linalg.norm(a))
                if na > 0.0:
                    ws[s] = (np.conj(a) if cplx else a) / na
                val = na
            if abs(val - old) <= rtol * max(val, 1e-300):
                break
        if val > best_val + 1e-15:
            best_val, best_tuple = val, [w.copy() for w in ws]
    return NormResult(best_val, best_tuple, max(form.hilbert_schmidt_norm(), best_val), best_val,
                      "multilinear-bca")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _quadratic_norm(form: SymmetricForm) -> NormResult:
    A = form.tensor()
    if form.field is Field.REAL:
        lam, vecs = np.linalg.eigh(A)
        j = int(np.argmax(np.abs(lam)))
        val = float(abs(lam[j]))
        return NormResult(val, [vecs[:, j]], val, val, "quadratic-spectral")
    # complex symmetric: sup |w^T A w| is the largest singular value (Takagi)
    U, s, Vh = np.linalg.svd(A)
    val = float(s[0])
    w = Vh[0].conj()
    attained = abs(w @ A @ w)
    if attained < val * (1 - 1e-9):
        local = sup_norm_sphere(form) if form.dim != 2 else sup_norm_complex_2d(form)
        return NormResult(val, local.maximizers, val, local.value, "quadratic-spectral")
    return NormResult(val, [canonical_phase(w)], val, val, "quadratic-spectral")


def form_norm(form: SymmetricForm) -> NormResult:
    """Best available sup-norm engine for ``form``."""
    if form.is_zero:
        return _zero_result("zero")
    if form.dim == 1:
        c = abs(complex(form.coeff((form.degree,))))
        return NormResult(c, [np.array([1.0])], c, c, "one-dimensional")
    if form.degree == 1:
        a = form.coeff_vector()
        n = float(np.linalg.norm(a))
        w = (np.conj(a) if form.field is Field.COMPLEX else a) / n
        return NormResult(n, [w], n, n, "linear")
    if form.degree == 2:
        return _quadratic_norm(form)
    if form.dim == 2:
        if form.field is Field.REAL:
            return sup_norm_real_2d(form)
        return sup_norm_complex_2d(form)
    return sup_norm_sphere(form)


def attainment_defect(form: SymmetricForm, tuple_: Sequence) -> float:
    """``||T|| - |T(x_1, ..., x_k)|``; zero (up to rounding) exactly at attainment."""
    vecs = [coerce_vector(v, form.field, form.dim) for v in tuple_]
    for v in vecs:
        if not is_unit(v, 1e-10):
            raise PreconditionError("attainment tuples must consist of unit vectors")
    value = polarization_eval(form, vecs)
    return form_norm(form).value - abs(complex(value))
