"""Randomized verification suites with reproducible, replayable reports.

Every trial draws from its own generator ``numpy.random.default_rng([seed,
trial])`` (PCG64), so a report is a function of ``(name, seed, config)``
and any single trial can be rerun in isolation.  Failing trials carry
their full inputs; :func:`replay_failure` recomputes them.
"""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import ArgumentError
from .forms import (ElementaryTensor, Field, OrthonormalBasis, SymmetricForm, lift,
                    multi_indices, polarization_eval)
from .norms import form_norm, multilinear_norm_bruteforce
from .projective import pis_elementary, uniqueness_on_span
from .serialize import tuple_from_json, tuple_to_json
from .witness import DyadicVector, bilinear_witness, collinear_witness, dyadic_witness

GENERATOR = "numpy PCG64 via default_rng([seed, trial])"


@dataclass
class ExperimentReport:
    name: str
    seed: int
    config: dict
    trials: int
    pass_count: int
    failures: list
    stats: dict
    checks: dict = dc_field(default_factory=dict)
    generator: str = GENERATOR
    timestamp: str = ""

    @property
    def ok(self) -> bool:
        return self.pass_count == self.trials and not self.failures and all(self.checks.values())

    def to_dict(self) -> dict:
        return {"name": self.name, "seed": self.seed, "config": self.config, "trials": self.trials,
                "pass": self.pass_count, "failures": self.failures, "stats": self.stats,
                "checks": self.checks, "ok": self.ok, "generator": self.generator,
                "timestamp": self.timestamp}


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _summary(values: Sequence[float]) -> dict:
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return {"min": None, "max": None, "mean": None, "median": None}
    return {"min": float(a.min()), "max": float(a.max()), "mean": float(a.mean()),
            "median": float(np.median(a))}


def _run_trials(name: str, seed: int, config: dict, trials: int,
                trial_fn: Callable[[int], dict]) -> tuple[ExperimentReport, list]:
    records = [trial_fn(i) for i in range(trials)]
    failures = [r for r in records if not r["passed"]]
    report = ExperimentReport(name, seed, config, trials, trials - len(failures), failures, {},
                              timestamp=_now())
    return report, records


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _gaussian(rng, shape, field: Field) -> np.ndarray:
    g = rng.standard_normal(shape)
    if field is Field.COMPLEX:
        g = g + 1j * rng.standard_normal(shape)
    return g


def random_frame(rng, field: Field, d: int, m: int) -> np.ndarray:
    """``d x m`` matrix with orthonormal columns (QR of a Gaussian matrix)."""
    q, r = np.linalg.qr(_gaussian(rng, (d, m), field))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph.conj()


def sample_tuple(rng, field, k: int, d: int, span: int) -> list[np.ndarray]:
    """``k`` unit vectors in K^d whose span has dimension exactly ``span``.

    The vectors are the columns of a random orthonormal frame followed by
    random combinations of them, in random order.  For ``span = 1`` the
    vectors are unimodular multiples of one unit vector.
    """
    field = Field(field)
    if not 1 <= span <= min(k, d):
        raise ArgumentError(f"span {span} impossible for k={k}, d={d}")
    Q = random_frame(rng, field, d, span)
    if span == 1:
        if field is Field.REAL:
            c = rng.choice([-1.0, 1.0], size=(k, 1))
        else:
            c = np.exp(2j * np.pi * rng.random((k, 1)))
    else:
        c = np.vstack([np.eye(span), _gaussian(rng, (k - span, span), field)])
        c = c[rng.permutation(k)]
    vecs = c @ Q.T
    return [v / np.linalg.norm(v) for v in vecs]


def random_form(rng, field, d: int, k: int) -> SymmetricForm:
    """Gaussian coefficients scaled by ``sqrt(multinomial)`` (a Gaussian symmetric tensor)."""
    field = Field(field)
    alphas = multi_indices(d, k)
    g = _gaussian(rng, len(alphas), field)
    coeffs = {}
    for a, c in zip(alphas, g):
        mult = math.factorial(k)
        for e in a:
            mult //= math.factorial(e)
        coeffs[a] = complex(c) * math.sqrt(mult) if field is Field.COMPLEX else float(c) * math.sqrt(mult)
    return SymmetricForm(field, d, k, coeffs)


# ---------------------------------------------------------------------------
# dichotomy for the symmetric projective norm
# ---------------------------------------------------------------------------

def _dichotomy_check(field: Field, span: int, value: float, upper: float, tol: float, gap: float) -> tuple[bool, str]:
    if span == 1 or (field is Field.REAL and span == 2):
        return abs(value - 1.0) <= tol and upper >= 1.0 - tol, "one"
    return upper <= 1.0 - gap, "below"


def _main_trial(field: Field, k: int, d: int, span: int, vecs: list, tol: float, gap: float,
                trial: int) -> dict:
    res = pis_elementary(ElementaryTensor(field, tuple(vecs)))
    passed, expected = _dichotomy_check(field, span, res.value, res.certified_upper, tol, gap)
    return {"suite": "main", "trial": trial, "passed": bool(passed),
            "config": {"field": field.value, "k": k, "d": d, "span": span, "tol": tol, "gap": gap},
            "tuple": tuple_to_json(vecs, field), "expected": expected,
            "value": res.value, "certified_upper": res.certified_upper,
            "certified_lower": res.certified_lower, "span_dim": res.span_dim}


def run_main_theorem_suite(field="real", k: int = 3, d: int = 2, trials: int = 20, seed: int = 0,
                           span: int | None = None, tol: float = 1e-4, gap: float = 1e-3) -> ExperimentReport:
    """Sample tuples of prescribed span and test the attainment dichotomy.

    Real tuples spanning at most two dimensions must give ``pi_s = 1``
    within ``tol``; real span three and complex span two must give a
    certified upper bound ``<= 1 - gap``; complex collinear tuples give 1.
    With ``span=None`` the trials cycle through every feasible span.
    """
    field = Field(field)
    if k < 3:
        raise ArgumentError("the main suite needs k >= 3")
    top = min(k, d, 3 if field is Field.REAL else 2)
    spans = [span] if span is not None else list(range(1, top + 1))
    for s in spans:
        if not 1 <= s <= top:
            raise ArgumentError(f"span {s} outside 1..{top} for this configuration")

    def trial(i):
        s = spans[i % len(spans)]
        vecs = sample_tuple(_rng(seed, i), field, k, d, s)
        return _main_trial(field, k, d, s, vecs, tol, gap, i)

    config = {"field": field.value, "k": k, "d": d, "span": span, "tol": tol, "gap": gap}
    report, records = _run_trials("main", seed, config, trials, trial)
    by_span = {}
    for s in spans:
        vals = [r["value"] for r in records if r["config"]["span"] == s]
        ups = [r["certified_upper"] for r in records if r["config"]["span"] == s]
        by_span[str(s)] = {"value": _summary(vals), "upper": _summary(ups)}
    report.stats = {"value": _summary([r["value"] for r in records]), "by_span": by_span}
    return report


# ---------------------------------------------------------------------------
# Bollobas-type stability
# ---------------------------------------------------------------------------

def _orthogonal_unit(rng, x: np.ndarray, field: Field) -> np.ndarray:
    while True:
        u = _gaussian(rng, x.shape, field)
        u = u - np.vdot(x, u) * x
        n = np.linalg.norm(u)
        if n > 1e-8:
            return u / n


def _residuals(X: np.ndarray, M: np.ndarray) -> np.ndarray:
    Q, _ = np.linalg.qr(M)
    return np.linalg.norm(X - Q @ (Q.conj().T @ X), axis=0)


def subspace_distances(vecs: Sequence, r: int) -> np.ndarray:
    """Distances of the vectors to the span of the top ``r`` eigenvectors of ``sum x x^*``."""
    X = np.array([np.asarray(v, dtype=np.complex128) for v in vecs]).T
    lam, U = np.linalg.eigh(X @ X.conj().T)
    top = U[:, np.argsort(-lam, kind="stable")[:r]]
    return _residuals(X, top)


def minimax_subspace_distances(vecs: Sequence, r: int) -> np.ndarray:
    """Distances to an ``r``-dimensional subspace locally minimizing the largest one.

    Starts from the eigenvector subspace and runs SLSQP on the epigraph
    form ``min s  s.t.  dist_j^2 <= s``; the better of the two subspaces
    is returned, so the result never exceeds :func:`subspace_distances`.
    """
    X = np.array([np.asarray(v, dtype=np.complex128) for v in vecs]).T
    d = X.shape[0]
    lam, U = np.linalg.eigh(X @ X.conj().T)
    M0 = U[:, np.argsort(-lam, kind="stable")[:r]]
    start = _residuals(X, M0)

    def unpack(z):
        return (z[:d * r] + 1j * z[d * r:2 * d * r]).reshape(d, r)

    z0 = np.concatenate([M0.real.ravel(), M0.imag.ravel(), [float(np.max(start) ** 2)]])
    cons = {"type": "ineq", "fun": lambda z: z[-1] - _residuals(X, unpack(z)) ** 2}
    res = minimize(lambda z: z[-1], z0, jac=lambda z: np.eye(len(z))[-1], constraints=[cons],
                   method="SLSQP", options={"ftol": 1e-15, "maxiter": 200})
    M = unpack(res.x)
    if np.linalg.matrix_rank(M, tol=1e-8) < r:
        return start
    refined = _residuals(X, M)
    return refined if np.max(refined) < np.max(start) else start


def _bollobas_base(rng, field: Field, k: int, d: int):
    """A form of norm one and a tuple where it attains, in K^d."""
    if field is Field.REAL:
        while True:
            idx = rng.integers(1, 9, size=k)
            if len({int(i) % 4 for i in idx}) > 1:
                break
        cert = dyadic_witness([DyadicVector(2, int(i)) for i in idx])
        Q = random_frame(rng, field, d, 2)
        basis = OrthonormalBasis(field, tuple(Q.T))
        T = lift(cert.form.to_float(), basis)
        vecs = [Q @ np.asarray(v, dtype=float) for v in cert.tuple]
        return T, vecs, float(cert.norm_upper), {"indices": [int(i) for i in idx]}
    x = random_frame(rng, field, d, 1)[:, 0]
    vecs = [x * np.exp(2j * np.pi * rng.random()) for _ in range(k)]
    cert = collinear_witness(x, k, field)
    return cert.form, vecs, 1.0, {}


def _bollobas_trial(field: Field, k: int, d: int, delta: float, seed: int, trial: int) -> dict:
    rng = _rng(seed, trial)
    T, vecs, norm, info = _bollobas_base(rng, field, k, d)
    dirs = [_orthogonal_unit(rng, x, field) for x in vecs]
    pert = [math.cos(delta) * x + math.sin(delta) * u for x, u in zip(vecs, dirs)]
    defect = norm - abs(complex(polarization_eval(T, pert)))
    r = 2 if field is Field.REAL else 1
    pca = float(np.max(subspace_distances(pert, r)))
    dist = float(np.max(minimax_subspace_distances(pert, r)))
    bound = math.sqrt(k) * math.sin(delta) + 1e-12
    passed = defect >= -1e-9 and dist <= pca + 1e-15 and pca <= bound
    if delta == 0.0:
        passed = passed and defect <= 1e-8 and dist <= 1e-8
    return {"suite": "bollobas", "trial": trial, "passed": bool(passed),
            "config": {"field": field.value, "k": k, "d": d, "delta": delta, "seed": seed},
            "tuple": tuple_to_json(pert, field), "defect": float(defect), "distance": dist,
            "pca_distance": pca, "distance_bound": bound, **info}


def run_bollobas_experiment(k: int = 3, eps_list: Sequence[float] = (0.0, 0.01, 0.1), trials: int = 50,
                            seed: int = 0, field="real", d: int = 3) -> ExperimentReport:
    """Perturb attainment tuples by angle ``delta`` and watch defect and subspace distance.

    Trial ``i`` uses the same base configuration and perturbation
    directions for every ``delta``.  The subspace (dimension 2 real, 1
    complex) starts as the span of the top eigenvectors of ``sum x x^*``,
    whose max distance is at most ``sqrt(k) sin(delta)`` (the per-trial
    check), and is then refined to locally minimize the max distance.  The
    suite check is the trend: median distance strictly increases with
    ``delta``.
    """
    field = Field(field)
    if k < 3:
        raise ArgumentError("the Bollobas experiment needs k >= 3")
    if d > 3 or d < 2:
        raise ArgumentError("the Bollobas experiment works in dimension 2 or 3")
    deltas = sorted(float(e) for e in eps_list)
    if any(e < 0 for e in deltas):
        raise ArgumentError("perturbation angles must be nonnegative")
    records = [_bollobas_trial(field, k, d, delta, seed, i) for delta in deltas for i in range(trials)]
    failures = [r for r in records if not r["passed"]]
    buckets = {}
    for delta in deltas:
        rs = [r for r in records if r["config"]["delta"] == delta]
        buckets[repr(delta)] = {"defect": _summary([r["defect"] for r in rs]),
                                "distance": _summary([r["distance"] for r in rs])}
    medians = [buckets[repr(e)]["distance"]["median"] for e in deltas]
    defect_medians = [buckets[repr(e)]["defect"]["median"] for e in deltas]
    checks = {"distance_trend": all(a < b for a, b in zip(medians, medians[1:])),
              "defect_trend": all(a <= b for a, b in zip(defect_medians, defect_medians[1:]))}
    config = {"field": field.value, "k": k, "d": d, "eps_list": deltas}
    return ExperimentReport("bollobas", seed, config, len(records), len(records) - len(failures),
                            failures, {"by_delta": buckets,
                                       "curve": [[e, m, dm] for e, m, dm in zip(deltas, defect_medians, medians)],
                                       "subspace": "top eigenvectors of sum x x^*, refined to a local min-max"},
                            checks, timestamp=_now())


# ---------------------------------------------------------------------------
# uniqueness on the span
# ---------------------------------------------------------------------------

def _uniqueness_trial(indices: Sequence[int], tol: float, trial: int) -> dict:
    targets = [DyadicVector(2, int(i)) for i in indices]
    vecs = [np.asarray(t.vector, dtype=float) for t in targets]
    res = uniqueness_on_span(vecs, tol)
    if len(vecs) == 2:
        ref = bilinear_witness(vecs[0], vecs[1], Field.REAL).form.to_float()
    else:
        cert = dyadic_witness(targets)
        ref = cert.form.to_float().scale(1.0 if float(cert.value) >= 0 else -1.0)
    distance = float(res.forms[0].max_coeff_distance(ref))
    passed = res.unique and distance <= tol
    return {"suite": "uniqueness", "trial": trial, "passed": bool(passed),
            "config": {"k": len(vecs), "tol": tol}, "indices": [int(i) for i in indices],
            "tuple": tuple_to_json(vecs, Field.REAL), "unique": bool(res.unique),
            "spread": float(res.spread), "witness_distance": distance}


def run_uniqueness_suite(k: int = 3, trials: int = 10, seed: int = 0, tol: float = 1e-6) -> ExperimentReport:
    """Random spanning tuples from the dyadic directions of level 2.

    Each trial must report a unique extremal form on the plane, equal (up
    to the sign of its value) to the dyadic or bilinear witness.
    """
    if k < 2:
        raise ArgumentError("uniqueness needs k >= 2")

    def trial(i):
        rng = _rng(seed, i)
        while True:
            idx = rng.integers(1, 9, size=k)
            if len({int(j) % 4 for j in idx}) > 1:
                return _uniqueness_trial(idx, tol, i)

    report, records = _run_trials("uniqueness", seed, {"k": k, "tol": tol}, trials, trial)
    report.stats = {"spread": _summary([r["spread"] for r in records]),
                    "witness_distance": _summary([r["witness_distance"] for r in records])}
    return report


# ---------------------------------------------------------------------------
# isometry between forms and polynomials
# ---------------------------------------------------------------------------

ISOMETRY_CASES = tuple([(Field.REAL, 2, k) for k in range(2, 7)] + [(Field.COMPLEX, 2, k) for k in range(2, 7)]
                       + [(Field.REAL, 3, 3), (Field.REAL, 3, 4)])


def _isometry_check(form: SymmetricForm, restarts: int, tol: float) -> tuple[bool, float, float]:
    brute = multilinear_norm_bruteforce(form, restarts=restarts).value
    diag = form_norm(form).value
    return abs(brute - diag) <= tol * max(1.0, diag), brute, diag


def run_isometry_suite(trials: int = 200, seed: int = 0, restarts: int = 16, tol: float = 1e-6) -> ExperimentReport:
    """Multilinear sup (block-coordinate ascent) against the diagonal sup norm.

    Trials cycle through real and complex forms on K^2 of degree 2..6 and
    real forms on R^3 of degree 3 and 4.
    """
    def trial(i):
        field, d, k = ISOMETRY_CASES[i % len(ISOMETRY_CASES)]
        form = random_form(_rng(seed, i), field, d, k)
        ok, brute, diag = _isometry_check(form, restarts, tol)
        return {"suite": "isometry", "trial": i, "passed": bool(ok),
                "config": {"field": field.value, "d": d, "k": k, "restarts": restarts, "tol": tol},
                "form": form.to_dict(), "bruteforce": brute, "diagonal": diag,
                "difference": abs(brute - diag)}

    config = {"restarts": restarts, "tol": tol}
    report, records = _run_trials("isometry", seed, config, trials, trial)
    report.stats = {"difference": _summary([r["difference"] for r in records]),
                    "relative_difference": _summary([r["difference"] / max(1.0, r["diagonal"]) for r in records])}
    return report


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------

def replay_failure(record: Mapping) -> dict:
    """Recompute a trial record from its stored inputs.

    Returns the fresh record; ``fresh["passed"]`` is False when the
    failure reproduces.
    """
    if not isinstance(record, Mapping) or "suite" not in record:
        raise ArgumentError("a failure record needs a 'suite' field")
    suite = record["suite"]
    cfg = record.get("config", {})
    trial = int(record.get("trial", 0))
    try:
        if suite == "main":
            field, vecs = tuple_from_json(record["tuple"])
            return _main_trial(field, int(cfg["k"]), int(cfg["d"]), int(cfg["span"]), vecs,
                               float(cfg["tol"]), float(cfg["gap"]), trial)
        if suite == "bollobas":
            return _bollobas_trial(Field(cfg["field"]), int(cfg["k"]), int(cfg["d"]), float(cfg["delta"]),
                                   int(cfg["seed"]), trial)
        if suite == "uniqueness":
            return _uniqueness_trial(record["indices"], float(cfg["tol"]), trial)
        if suite == "isometry":
            form = SymmetricForm.from_dict(record["form"])
            ok, brute, diag = _isometry_check(form, int(cfg["restarts"]), float(cfg["tol"]))
            return {**record, "passed": bool(ok), "bruteforce": brute, "diagonal": diag,
                    "difference": abs(brute - diag)}
    except KeyError as exc:
        raise ArgumentError(f"failure record lacks {exc.args[0]!r}") from exc
    raise ArgumentError(f"unknown suite {suite!r}")
