"""JSON documents for vectors, tuples, forms and reports.

Real vectors are lists of numbers; complex vectors are lists of
``{"re": .., "im": ..}`` objects (a plain number is read as a real
entry).  A tuple document is ``{"field": "real"|"complex", "vectors":
[...]}``; ``"factors"`` and ``"tuple"`` are accepted as aliases.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import ArgumentError
from .forms import Field, SymmetricForm


def scalar_to_json(z) -> Any:
    if isinstance(z, Fraction):
        return z.numerator if z.denominator == 1 else float(z)
    if isinstance(z, (int, np.integer)) and not isinstance(z, bool):
        return int(z)
    if isinstance(z, (complex, np.complexfloating)):
        return {"re": float(z.real), "im": float(z.imag)}
    return float(z)


def vector_to_json(v) -> list:
    if isinstance(v, tuple) and all(isinstance(x, (int, Fraction)) for x in v):
        return [scalar_to_json(x) for x in v]
    a = np.asarray(v)
    if np.iscomplexobj(a):
        return [{"re": float(z.real), "im": float(z.imag)} for z in a]
    return [float(x) for x in a]


def _entry(x, field: Field):
    if isinstance(x, Mapping):
        try:
            z = complex(float(x.get("re", 0.0)), float(x.get("im", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed scalar {x!r}") from exc
        return z if field is Field.COMPLEX else z.real
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ArgumentError(f"malformed scalar {x!r}")
    return x


def vector_from_json(doc: Sequence, field: Field) -> np.ndarray | tuple:
    """Integer-only real vectors stay exact tuples; everything else is an array."""
    if not isinstance(doc, (list, tuple)) or not doc:
        raise ArgumentError("a vector is a non-empty list of scalars")
    entries = [_entry(x, field) for x in doc]
    if field is Field.REAL:
        if any(isinstance(x, complex) and x.imag for x in entries):
            raise ArgumentError("complex entry in a real vector")
        if all(isinstance(x, int) for x in entries):
            return tuple(entries)
        return np.array(entries, dtype=float)
    return np.array(entries, dtype=complex)


def tuple_to_json(vectors: Sequence, field) -> dict:
    return {"field": Field(field).value, "vectors": [vector_to_json(v) for v in vectors]}


def tuple_from_json(doc: Mapping) -> tuple[Field, list]:
    if not isinstance(doc, Mapping):
        raise ArgumentError("a tuple document is a JSON object")
    key = next((k for k in ("vectors", "factors", "tuple") if k in doc), None)
    if key is None:
        raise ArgumentError("tuple document needs a 'vectors' list")
    try:
        field = Field(doc.get("field", "real"))
    except ValueError as exc:
        raise ArgumentError(f"unknown field {doc.get('field')!r}") from exc
    vecs = doc[key]
    if not isinstance(vecs, list) or not vecs:
        raise ArgumentError("'vectors' must be a non-empty list")
    return field, [vector_from_json(v, field) for v in vecs]


def form_from_json(doc: Mapping) -> SymmetricForm:
    if not isinstance(doc, Mapping):
        raise ArgumentError("a form document is a JSON object")
    if "form" in doc and "coeffs" not in doc:
        doc = doc["form"]
    return SymmetricForm.from_dict(doc)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ArgumentError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True)


def flatten(doc: Mapping, prefix: str = "") -> dict:
    """Nested mappings become dotted keys; lists are kept as JSON strings."""
    out: dict = {}
    for key, val in doc.items():
        name = f"{prefix}{key}"
        if isinstance(val, Mapping):
            out.update(flatten(val, name + "."))
        elif isinstance(val, (list, tuple)):
            out[name] = json.dumps(val, sort_keys=True)
        else:
            out[name] = val
    return out


def to_csv(doc: Mapping) -> str:
    """Two-column ``key,value`` CSV of the flattened document."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, val in flatten(doc).items():
        writer.writerow([key, val])
    return buf.getvalue()
