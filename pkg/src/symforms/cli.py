"""Command-line front end: ``symforms <command> [options]``.

Exit codes: 0 on success, 1 when a verification suite (or a replayed
counterexample) fails, 2 on usage errors, which print a one-line
diagnosis to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import SymformsError
from .forms import ElementaryTensor, Field, polarization_eval
from .norms import form_norm, multilinear_norm_bruteforce, sup_norm_complex_2d, sup_norm_sphere
from .projective import complexification_gap, exposedness_check, pis_elementary
from .serialize import dumps, form_from_json, load_json, to_csv, tuple_from_json, vector_to_json
from .witness import diagonalize_bilinear, witness_for_tuple

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    # defaults are suppressed so flags given before and after the command merge
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--tol", type=float, help="tolerance override for checks")
    p.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
    return p


GLOBAL_DEFAULTS = {"seed": 0, "tol": None, "out": None, "format": "json"}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="symforms", parents=[common],
                     description="Norm-attaining symmetric multilinear forms on small Hilbert spaces.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("norm", parents=[common], help="sup norm of a form")
    p.add_argument("--in", dest="form", required=True, metavar="FORM.json")
    p.add_argument("--restarts", type=int, help="also run the multilinear brute-force oracle")
    p.add_argument("--grid", type=int, help="sphere grid resolution (complex C^2, real R^3)")

    p = sub.add_parser("witness", parents=[common], help="attainment certificate for a tuple")
    p.add_argument("--tuple", required=True, metavar="TUPLE.json")
    p.add_argument("--eps", type=float, help="angular tolerance for dyadic snapping")

    p = sub.add_parser("diagonalize", parents=[common], help="diagonalizing basis of a bilinear form")
    p.add_argument("--form", required=True, metavar="FORM.json")
    p.add_argument("--pair", required=True, metavar="PAIR.json")

    p = sub.add_parser("pis", parents=[common], help="symmetric projective norm of an elementary tensor")
    p.add_argument("--tensor", required=True, metavar="TENSOR.json")
    p.add_argument("--grid", type=int, help="initial grid resolution")
    p.add_argument("--refine", type=int, default=0, help="grid doublings")

    p = sub.add_parser("exposed", parents=[common], help="is the form exposed by the tuple?")
    p.add_argument("--form", required=True, metavar="FORM.json")
    p.add_argument("--tuple", required=True, metavar="TUPLE.json")

    p = sub.add_parser("cgap", parents=[common], help="real versus complexified norm")
    p.add_argument("--form", required=True, metavar="FORM.json")
    p.add_argument("--tuple", required=True, metavar="TUPLE.json")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=("main", "bollobas", "uniqueness", "isometry"))
    p.add_argument("--trials", type=int, help="number of trials (suite-specific default)")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--k", type=int, default=3, help="degree")
    p.add_argument("--d", type=int, help="ambient dimension")
    p.add_argument("--span", type=int, help="span dimension for the main suite (default: cycle)")
    p.add_argument("--eps", type=float, nargs="+", help="perturbation angles for the Bollobas suite")
    p.add_argument("--restarts", type=int, default=16, help="oracle restarts for the isometry suite")

    p = sub.add_parser("replay", parents=[common], help="recompute a failure record")
    p.add_argument("--in", dest="record", required=True, metavar="RECORD.json")
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _tuple(path: str) -> tuple[Field, list]:
    return tuple_from_json(load_json(path))


def cmd_norm(args) -> tuple[dict, int]:
    form = form_from_json(load_json(args.form))
    grid = getattr(args, "grid", None)
    if grid is not None and form.dim == 2 and form.field is Field.COMPLEX:
        res = sup_norm_complex_2d(form, grid)
    elif grid is not None and form.dim == 3 and form.field is Field.REAL:
        res = sup_norm_sphere(form, grid)
    else:
        res = form_norm(form)
    doc = res.to_dict()
    restarts = getattr(args, "restarts", None)
    if restarts is not None:
        doc["bruteforce"] = multilinear_norm_bruteforce(form, restarts=restarts, seed=args.seed).to_dict()
    return doc, EXIT_OK


def cmd_witness(args) -> tuple[dict, int]:
    field, vecs = _tuple(args.tuple)
    cert = witness_for_tuple(vecs, getattr(args, "eps", None), field)
    return cert.to_dict(), EXIT_OK


def cmd_diagonalize(args) -> tuple[dict, int]:
    form = form_from_json(load_json(args.form))
    _, vecs = _tuple(args.pair)
    if len(vecs) != 2:
        raise UsageError("the pair document must hold exactly two vectors")
    basis = diagonalize_bilinear(form, vecs[0], vecs[1])
    f1, f2 = basis.vectors
    eqs = {"T(f1,f1)": polarization_eval(form, [f1, f1]), "T(f2,f2)": polarization_eval(form, [f2, f2]),
           "T(f1,f2)": polarization_eval(form, [f1, f2])}
    return {"basis": [vector_to_json(f1), vector_to_json(f2)],
            "equations": {k: _scalar(v) for k, v in eqs.items()}}, EXIT_OK


def _scalar(z):
    z = complex(z)
    return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}


def cmd_pis(args) -> tuple[dict, int]:
    field, vecs = _tuple(args.tensor)
    res = pis_elementary(ElementaryTensor(field, tuple(vecs)), getattr(args, "grid", None), args.refine)
    return res.to_dict(), EXIT_OK


def cmd_exposed(args) -> tuple[dict, int]:
    form = form_from_json(load_json(args.form))
    _, vecs = _tuple(args.tuple)
    tol = args.tol if args.tol is not None else 1e-6
    return {"exposed": bool(exposedness_check(form, vecs, tol)), "tol": tol}, EXIT_OK


def cmd_cgap(args) -> tuple[dict, int]:
    form = form_from_json(load_json(args.form))
    _, vecs = _tuple(args.tuple)
    gap = complexification_gap(form, vecs)
    return {"real_norm": gap.real_norm, "complex_norm": gap.complex_norm, "margin": gap.margin,
            "strict": bool(gap.margin > 0)}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    from . import experiments as E
    seed = args.seed
    tol = args.tol
    kw = {} if tol is None else {"tol": tol}
    if args.suite == "main":
        field = args.field
        d = args.d if args.d is not None else (3 if field == "real" else 2)
        report = E.run_main_theorem_suite(field, args.k, d, args.trials or 20, seed, args.span, **kw)
    elif args.suite == "bollobas":
        d = args.d if args.d is not None else (3 if args.field == "real" else 2)
        eps = tuple(args.eps) if args.eps else (0.0, 0.01, 0.1)
        report = E.run_bollobas_experiment(args.k, eps, args.trials or 50, seed, args.field, d)
    elif args.suite == "uniqueness":
        report = E.run_uniqueness_suite(args.k, args.trials or 10, seed, **kw)
    else:
        report = E.run_isometry_suite(args.trials or 200, seed, args.restarts, **kw)
    return report.to_dict(), EXIT_OK if report.ok else EXIT_FAIL


def cmd_replay(args) -> tuple[dict, int]:
    from .experiments import replay_failure
    record = load_json(args.record)
    if isinstance(record, dict) and "failures" in record and "suite" not in record:
        if not record["failures"]:
            raise UsageError("the report holds no failures to replay")
        record = record["failures"][0]
    fresh = replay_failure(record)
    return {"reproduced": not fresh["passed"], "record": fresh}, EXIT_FAIL if not fresh["passed"] else EXIT_OK


COMMANDS = {"norm": cmd_norm, "witness": cmd_witness, "diagonalize": cmd_diagonalize, "pis": cmd_pis,
            "exposed": cmd_exposed, "cgap": cmd_cgap, "verify": cmd_verify, "replay": cmd_replay}


def _emit(doc: dict, fmt: str, out: str | None):
    text = to_csv(doc) if fmt == "csv" else dumps(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnose(message: str) -> int:
    line = " ".join(str(message).split())
    print(f"symforms: error: {line}", file=sys.stderr)
    return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _diagnose(str(exc))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    for key, val in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        doc, code = COMMANDS[args.command](args)
        _emit(doc, args.format, args.out)
    except (UsageError, SymformsError) as exc:
        return _diagnose(str(exc))
    except OSError as exc:
        return _diagnose(f"cannot write {args.out}: {exc.strerror}")
    return code


if __name__ == "__main__":
    sys.exit(main())
