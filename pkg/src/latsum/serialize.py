"""JSON input parsing and deterministic payload construction.

Input schemas (all JSON objects):

    space:    {"dim": n, "r": number | "inf", "weights": [w1..wn]?}
    sequence: {"space": {...}, "vectors": [[..], ..]}
    operator: {"matrix": [[..], ..], "domain": {...}, "codomain": {...}}
    tensor:   {"p": number | "inf", "space": {...}, "rows": [[..], ..]}

Schema violations raise InputFormatError naming the offending field.
Dumps sort keys and never embed timestamps, so identical inputs and
configs produce byte-identical output.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .lattice import LatticeSpace, VectorSequence
from .opnorms import LinearOperator
from .search import NormEstimate
from .tensors import TensorElement

__all__ = [
    "InputFormatError",
    "load_exponent",
    "load_space",
    "load_sequence",
    "load_operator",
    "load_tensor",
    "load_json_file",
    "space_payload",
    "estimate_payload",
    "dump_json",
]


class InputFormatError(ValueError):
    """A malformed input document; `field` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _require(obj, field: str, outer: str):
    if not isinstance(obj, dict):
        raise InputFormatError(outer, "expected a JSON object")
    if field not in obj:
        raise InputFormatError(f"{outer}.{field}" if outer else field, "missing")
    return obj[field]


def load_exponent(value, field: str) -> float:
    if value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputFormatError(field, "expected a number or \"inf\"")
    ex = float(value)
    if not ex >= 1.0:
        raise InputFormatError(field, "exponent must be >= 1")
    return ex


def _float_matrix(value, field: str, width=None) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise InputFormatError(field, "expected a rectangular array of numbers")
    if arr.ndim != 2:
        raise InputFormatError(field, "expected a list of equal-length rows")
    if width is not None and arr.shape[1] != width:
        raise InputFormatError(field, f"rows must have length {width}")
    if not np.all(np.isfinite(arr)):
        raise InputFormatError(field, "entries must be finite")
    return arr


def load_space(obj, outer: str = "space") -> LatticeSpace:
    dim = _require(obj, "dim", outer)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputFormatError(f"{outer}.dim", "expected a positive integer")
    exponent = load_exponent(_require(obj, "r", outer), f"{outer}.r")
    weights = None
    if obj.get("weights") is not None:
        try:
            weights = np.asarray(obj["weights"], dtype=float)
        except (TypeError, ValueError):
            raise InputFormatError(f"{outer}.weights", "expected a list of numbers")
        if weights.shape != (dim,):
            raise InputFormatError(f"{outer}.weights", f"expected {dim} entries")
        if not np.all(weights > 0):
            raise InputFormatError(f"{outer}.weights", "weights must be positive")
    try:
        return LatticeSpace(dim, exponent, weights)
    except ValueError as exc:
        raise InputFormatError(outer, str(exc))


def load_sequence(obj) -> VectorSequence:
    space = load_space(_require(obj, "space", ""), "space")
    vectors = _float_matrix(_require(obj, "vectors", ""), "vectors", width=space.dim)
    return VectorSequence(space, vectors)


def load_operator(obj) -> LinearOperator:
    domain = load_space(_require(obj, "domain", ""), "domain")
    codomain = load_space(_require(obj, "codomain", ""), "codomain")
    matrix = _float_matrix(_require(obj, "matrix", ""), "matrix", width=domain.dim)
    if matrix.shape[0] != codomain.dim:
        raise InputFormatError("matrix", f"expected {codomain.dim} rows")
    return LinearOperator(matrix, domain, codomain)


def load_tensor(obj) -> TensorElement:
    exponent = load_exponent(_require(obj, "p", ""), "p")
    space = load_space(_require(obj, "space", ""), "space")
    rows = _float_matrix(_require(obj, "rows", ""), "rows", width=space.dim)
    if rows.shape[0] < 1:
        raise InputFormatError("rows", "a tensor needs at least one row")
    return TensorElement(VectorSequence(space, rows), exponent)


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError("file", str(exc))
    except json.JSONDecodeError as exc:
        raise InputFormatError("file", f"invalid JSON: {exc}")


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(value.item())
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def space_payload(space: LatticeSpace) -> dict:
    return {
        "dim": space.dim,
        "r": "inf" if space.exponent == math.inf else space.exponent,
        "weights": space.weights.tolist(),
    }


def estimate_payload(est: NormEstimate) -> dict:
    return {
        "value": est.value,
        "exact": est.exact,
        "method": est.method,
        "starts_used": est.starts_used,
        "iterations": est.iterations,
        "seed": est.seed,
        "certificate": _jsonable(est.certificate),
    }


def dump_json(payload) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
