"""JSON wire formats for matrices, grid elements and reports.

Matrix: ``{"rows": n, "cols": m, "data": [[[re, im], ...], ...]}``.
Floats are written with Python's shortest round-trip repr, so a
save/load cycle is bit-exact.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .numlin import InputError, as_cmatrix


def matrix_to_json(T) -> dict:
    A = as_cmatrix(T)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        A = np.array(
            [[complex(float(re), float(im)) for re, im in row] for row in data],
            dtype=complex,
        ).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows or any(len(row) != cols for row in data):
        raise InputError("matrix JSON rows/cols disagree with data")
    return as_cmatrix(A)


def _finite(x):
    # JSON has no NaN/inf; reports should never carry them but fail loudly if they do
    if isinstance(x, float) and not math.isfinite(x):
        raise InputError(f"non-finite value {x!r} in report")
    return x


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays; complex matrices go to matrix JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_json(obj)
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return _finite(float(obj))
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def save_matrix(path, T) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(T)) + "\n")


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))
