"""JSON interchange for families and reports.

A family file holds ``{"labels": [...], "nu": [...], "A": [[...], ...]}``
with numbers or ``"p/q"`` strings, or one of the shorthands
``{"partition": [[...], ...]}`` and
``{"hierarchical": {"cardinalities": [...], "complex": [[...], ...]}}``.
Reports are written with sorted keys; floats use the shortest repr that
round-trips, and non-finite floats become the strings ``"inf"``,
``"-inf"`` and ``"nan"``.
"""

import json
import math
from fractions import Fraction

import numpy as np

from . import exact
from .errors import ExpFamError, ParseError, SchemaError
from .family import build_family
from .partition import Partition
from .zoo import HierarchicalSpec, hierarchical_family, partition_family


def load_json(path):
    """Parse a JSON file, reporting the line and column of syntax errors."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ParseError(f"{path}: {err.strerror}") from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: line {err.lineno} column {err.colno}: {err.msg}") from err


def _schema(field, message):
    err = SchemaError(f"{field}: {message}")
    err.field = field
    return err


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise _schema(field, f"expected a number or 'p/q' string, got {value!r}")
    try:
        return exact.to_fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        raise _schema(field, f"cannot read {value!r} as a rational") from err


def _list(value, field):
    if not isinstance(value, list):
        raise _schema(field, f"expected a list, got {type(value).__name__}")
    return value


def family_from_dict(data):
    """Build a family from the parsed JSON of a family file."""
    if not isinstance(data, dict):
        raise _schema("$", "expected an object")
    try:
        if "partition" in data:
            blocks = _list(data["partition"], "partition")
            for i, b in enumerate(blocks):
                _list(b, f"partition[{i}]")
            return partition_family(Partition(blocks), data.get("labels"))
        if "hierarchical" in data:
            h = data["hierarchical"]
            if not isinstance(h, dict):
                raise _schema("hierarchical", "expected an object")
            for key in ("cardinalities", "complex"):
                if key not in h:
                    raise _schema(f"hierarchical.{key}", "missing")
            return hierarchical_family(HierarchicalSpec(
                _list(h["cardinalities"], "hierarchical.cardinalities"),
                _list(h["complex"], "hierarchical.complex")))
        for key in ("nu", "A"):
            if key not in data:
                raise _schema(key, "missing")
        nu = [_number(v, f"nu[{i}]") for i, v in enumerate(_list(data["nu"], "nu"))]
        rows = [[_number(v, f"A[{i}][{j}]") for j, v in enumerate(_list(r, f"A[{i}]"))]
                for i, r in enumerate(_list(data["A"], "A"))]
        labels = data.get("labels", len(nu))
        return build_family(labels, nu, rows)
    except SchemaError:
        raise
    except (ExpFamError, ValueError) as err:
        raise _schema("$", str(err)) from err


def family_to_dict(family):
    return {"labels": list(family.space.labels),
            "nu": [float(v) for v in family.nu],
            "A": [[exact.fraction_to_str(q) for q in row] for row in family.stats]}


def load_family(path):
    return family_from_dict(load_json(path))


def distribution_from_json(data, n, tol=1e-9):
    """A probability vector from a list or ``{"P": [...]}``."""
    if isinstance(data, dict):
        if "P" not in data:
            raise _schema("P", "missing")
        data = data["P"]
    values = [float(_number(v, f"P[{i}]")) for i, v in enumerate(_list(data, "P"))]
    P = np.array(values)
    if P.size != n:
        raise _schema("P", f"has {P.size} entries, the family has {n} states")
    if np.any(P < 0) or abs(P.sum() - 1.0) > tol:
        raise _schema("P", "not a probability vector")
    return P


def load_distribution(path, n):
    return distribution_from_json(load_json(path), n)


def to_jsonable(obj):
    """Recursively convert numpy and rational values into JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return exact.fraction_to_str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
