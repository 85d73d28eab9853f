"""JSON encodings. Rationals travel as strings ("3", "-1/2"); every document carries ``"format": "odlin/1"``."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .datavec import DataVector, Instance, MatrixInstance, instance_to_matrix_problem
from .linalg import InputError, frac
from .linpn import Vas
from .semieq import SemiEq, semieq_from_lists
from .solvers import Term, Verdict

FORMAT = "odlin/1"


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise InputError(f"expected an integer or rational string, got {s!r}")
    try:
        return frac(s)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {s!r}") from e


def loads(text: str) -> Any:
    """Parse JSON, turning syntax errors into InputError with line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if isinstance(doc, dict) and doc.get("format", FORMAT) != FORMAT:
        raise InputError(f"unsupported format {doc.get('format')!r}")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps({"format": FORMAT, **doc}, sort_keys=True)


def _field(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def _matrix(m) -> tuple:
    if not isinstance(m, list) or any(not isinstance(r, list) for r in m):
        raise InputError("a matrix is a list of rows")
    return tuple(tuple(parse_rat(v) for v in row) for row in m)


def matrix_json(m) -> list:
    return [[rat(v) for v in row] for row in m]


# ---------------------------------------------------------------------------
# data vectors and instances


def datavector_from_json(doc, dimension: int) -> DataVector:
    pts = []
    for p in _field(doc, "points"):
        pts.append((parse_rat(_field(p, "datum")), tuple(parse_rat(v) for v in _field(p, "vec"))))
    return DataVector(dimension, tuple(pts))


def datavector_json(v: DataVector) -> dict:
    return {"points": [{"datum": rat(a), "vec": [rat(x) for x in val]} for a, val in v.points]}


def instance_from_json(doc) -> Instance:
    d = _field(doc, "dimension")
    if not isinstance(d, int) or isinstance(d, bool):
        raise InputError("dimension must be an integer")
    target = datavector_from_json(_field(doc, "target"), d)
    vectors = tuple(datavector_from_json(v, d) for v in _field(doc, "vectors"))
    return Instance(d, target, vectors)


def matrix_instance_from_json(doc) -> MatrixInstance:
    return instance_to_matrix_problem(instance_from_json(doc))


def instance_json(inst: Instance | MatrixInstance) -> dict:
    if isinstance(inst, MatrixInstance):
        target = inst.target_vector()
        vectors = inst.generator_vectors()
    else:
        target, vectors = inst.target, list(inst.generators)
    return {"dimension": inst.dimension, "target": datavector_json(target),
            "vectors": [datavector_json(v) for v in vectors]}


# ---------------------------------------------------------------------------
# verdicts


def verdict_json(v: Verdict) -> dict:
    doc: dict = {"status": v.status, "slots": v.slots, "domain": v.domain}
    doc["witness"] = None if v.witness is None else [
        {"coeff": rat(t.coeff), "vector": t.vector, "placement": list(t.placement)} for t in v.witness
    ]
    if v.evidence is not None:
        doc["evidence"] = [rat(x) for x in v.evidence]
    if v.note:
        doc["note"] = v.note
    return doc


def witness_from_json(doc) -> tuple[list, int]:
    slots = _field(doc, "slots")
    terms = []
    for t in _field(doc, "witness") or []:
        vector = _field(t, "vector")
        placement = _field(t, "placement")
        if not isinstance(vector, int) or not isinstance(placement, list) or any(
                not isinstance(s, int) for s in placement):
            raise InputError("witness terms need an integer vector and an integer placement list")
        terms.append(Term(parse_rat(_field(t, "coeff")), vector, tuple(placement)))
    if not isinstance(slots, int):
        raise InputError("slots must be an integer")
    return terms, slots


# ---------------------------------------------------------------------------
# VAS, semi-equations, histograms


def vas_from_json(doc) -> Vas:
    d = _field(doc, "dimension")
    acts = tuple(tuple(parse_rat(v) for v in a) for a in _field(doc, "actions"))
    init = tuple(parse_rat(v) for v in _field(doc, "init"))
    final = tuple(parse_rat(v) for v in _field(doc, "final"))
    return Vas(d, acts, init, final)


def vas_json(vas: Vas) -> dict:
    return {"dimension": vas.dimension, "actions": [[int(v) for v in a] for a in vas.actions],
            "init": [int(v) for v in vas.init], "final": [int(v) for v in vas.final]}


def semieq_from_json(doc) -> SemiEq:
    a = _matrix(_field(doc, "A"))
    b = [parse_rat(v) for v in _field(doc, "b")]
    nvars = len(a[0]) if a else doc.get("nvars", 0)
    return semieq_from_lists(a, b, [tuple(p) for p in doc.get("implications", [])], nvars)


def matrix_from_json(doc) -> tuple:
    return _matrix(_field(doc, "matrix"))


def family_from_json(doc) -> list:
    return [_matrix(m) for m in _field(doc, "family")]
