"""Small dense linear programs ``max c.x  s.t.  A x <= b`` with free ``x``.

The problems met here have few variables (at most a few dozen) and many
constraints, so the dual ``min b.y  s.t.  A^T y = c, y >= 0`` is solved
with a two-phase revised simplex whose basis has one column per variable.
The primal solution is read off the simplex multipliers, which makes the
active constraints hold to rounding error.

Pivoting is deterministic: the entering column is the most violated
primal constraint (lowest index on ties), the leaving row follows the
ratio test with ties broken by the lowest basic index.  After a run of
degenerate pivots the entering rule switches to Bland's rule for the rest
of the phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None
    value: float
    duals: np.ndarray | None
    active: np.ndarray | None
    iterations: int


def _run(cols, rhs, cost, basis, allowed, tol, max_iter, counter):
    """Revised simplex on ``min cost.z, cols z = rhs, z >= 0`` from a feasible basis."""
    n = cols.shape[0]
    degenerate_run = 0
    bland = False
    while True:
        if counter[0] >= max_iter:
            raise RuntimeError("simplex iteration limit reached")
        B = cols[:, basis]
        z_b = np.linalg.solve(B, rhs)
        pi = np.linalg.solve(B.T, cost[basis])
        reduced = cost - pi @ cols
        reduced[~allowed] = np.inf
        reduced[basis] = np.inf
        if bland or degenerate_run > n + 10:
            bland = True
            candidates = np.flatnonzero(reduced < -tol)
            if candidates.size == 0:
                return basis, z_b, pi, "optimal"
            j = int(candidates[0])
        else:
            j = int(np.argmin(reduced))
            if not reduced[j] < -tol:
                return basis, z_b, pi, "optimal"
        d = np.linalg.solve(B, cols[:, j])
        rows = np.flatnonzero(d > 1e-9 * max(1.0, float(np.abs(d).max())))
        if rows.size == 0:
            if reduced[j] > -1e-9:
                # a rounding-level reduced cost along a (numerical) ray: skip the column
                allowed = allowed.copy()
                allowed[j] = False
                continue
            return basis, z_b, pi, "unbounded"
        ratios = np.maximum(z_b[rows], 0.0) / d[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-14]
        leave = int(min(ties, key=lambda r: basis[r]))
        degenerate_run = degenerate_run + 1 if best <= 1e-14 * max(1.0, float(np.abs(z_b).max())) else 0
        basis = basis.copy()
        basis[leave] = j
        counter[0] += 1


def _polish(cols, rhs, cost, basis, allowed, tol, max_iter, counter):
    """Dual simplex from an optimal basis of the perturbed problem back to ``rhs``.

    The basis keeps nonnegative reduced costs; rows with negative basic
    values leave (most negative first) until the basic solution is
    feasible again.  A pivot that would make the basis numerically
    singular ends the polish with the last good basis.
    """
    n = len(basis)
    B = cols[:, basis]
    z_b = np.linalg.solve(B, rhs)
    pi = np.linalg.solve(B.T, cost[basis])
    floor = -tol * max(1.0, float(np.abs(rhs).max()))
    while counter[0] < max_iter:
        r = int(np.argmin(z_b))
        if z_b[r] >= floor:
            break
        reduced = np.maximum(cost - pi @ cols, 0.0)
        alpha = np.linalg.solve(B.T, np.eye(n)[r]) @ cols
        mask = allowed & (alpha < -1e-9 * np.abs(alpha).max())
        mask[basis] = False
        cand = np.flatnonzero(mask)
        if cand.size == 0:
            break
        j = int(cand[np.argmin(reduced[cand] / -alpha[cand])])
        trial = basis.copy()
        trial[r] = j
        Bt = cols[:, trial]
        if np.linalg.cond(Bt) > 1e14:
            break
        basis, B = trial, Bt
        z_b = np.linalg.solve(B, rhs)
        pi = np.linalg.solve(B.T, cost[basis])
        counter[0] += 1
    return basis, z_b, pi


def solve_lp(c, A, b, tol: float = 1e-10, max_iter: int | None = None,
             perturbation: float = 1e-11) -> LPResult:
    """Maximize ``c.x`` subject to ``A x <= b``.

    Returns ``status="infeasible"`` when the primal has no feasible point
    (the dual is unbounded) and ``status="unbounded"`` when the primal
    objective is unbounded (the dual is infeasible).
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ArgumentError("inconsistent LP dimensions")
    signs = np.where(c < 0, -1.0, 1.0)
    cols = np.hstack([signs[:, None] * A.T, np.eye(n)])
    # a fixed staircase perturbation of the dual right-hand side removes
    # degeneracy; optimality (reduced costs) does not depend on it, so the
    # primal point read off the final basis stays feasible
    rhs_exact = signs * c
    rhs = rhs_exact + perturbation * max(1.0, float(np.abs(c).max())) * (1.0 + np.arange(n)) / n
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    counter = [0]

    # phase 1: drive the artificials to zero
    cost1 = np.concatenate([np.zeros(m), np.ones(n)])
    allowed = np.ones(m + n, dtype=bool)
    basis = np.arange(m, m + n)
    basis, z_b, _, _ = _run(cols, rhs, cost1, basis, allowed, tol, max_iter, counter)
    if float(cost1[basis] @ z_b) > 1e-8 * max(1.0, np.abs(rhs).max()):
        return LPResult("unbounded", None, np.inf, None, None, counter[0])

    # pivot zero-level artificials out where possible
    for r in range(n):
        if basis[r] < m:
            continue
        Binv_row = np.linalg.solve(cols[:, basis].T, np.eye(n)[r])
        entries = Binv_row @ cols[:, :m]
        entries[basis[basis < m]] = 0.0
        j = np.flatnonzero(np.abs(entries) > 1e-9)
        if j.size:
            basis = basis.copy()
            basis[r] = int(j[0])

    # phase 2 on the original costs; artificials may not re-enter
    cost2 = np.concatenate([b, np.zeros(n)])
    allowed = np.concatenate([np.ones(m, dtype=bool), np.zeros(n, dtype=bool)])
    basis, z_b, pi, status = _run(cols, rhs, cost2, basis, allowed, tol, max_iter, counter)
    if status == "unbounded":
        return LPResult("infeasible", None, -np.inf, None, None, counter[0])
    basis, z_b, pi = _polish(cols, rhs_exact, cost2, basis, allowed, 1e-13, max_iter, counter)
    x = signs * pi
    y = np.zeros(m)
    real = basis < m
    y[basis[real]] = np.maximum(z_b[real], 0.0)
    active = np.sort(basis[real])
    return LPResult("optimal", x, float(c @ x), y, active, counter[0])
