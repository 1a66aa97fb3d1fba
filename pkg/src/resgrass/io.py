"""JSON exchange format for operators and Grassmannian points.

Operators: ``{"n_plus": int, "n_minus": int, "entries": [[[re, im], ...], ...]}``
(row-major).  Points additionally carry ``"k"`` and store the n x k frame
in ``"entries"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch
from .grassmannian import GrassmannPoint, point_from_frame
from .polarized import BlockOperator, PolarizedSpace

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "operator_to_dict",
    "operator_from_dict",
    "point_to_dict",
    "point_from_dict",
    "save_operator",
    "load_operator",
]


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        if arr.size == 0:
            return np.zeros((len(rows), 0), dtype=np.complex128)
        raise DimensionMismatch("entries must be a matrix of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def operator_to_dict(a: BlockOperator) -> dict:
    return {"n_plus": a.space.n_plus, "n_minus": a.space.n_minus, "entries": matrix_to_json(a.entries)}


def operator_from_dict(data: dict, cls=BlockOperator) -> BlockOperator:
    space = PolarizedSpace(int(data["n_plus"]), int(data["n_minus"]))
    return cls(space, matrix_from_json(data["entries"]))


def point_to_dict(w: GrassmannPoint) -> dict:
    return {"n_plus": w.space.n_plus, "n_minus": w.space.n_minus, "k": w.k, "entries": matrix_to_json(w.frame)}


def point_from_dict(data: dict) -> GrassmannPoint:
    space = PolarizedSpace(int(data["n_plus"]), int(data["n_minus"]))
    frame = matrix_from_json(data["entries"]).reshape(space.n, int(data["k"]))
    return point_from_frame(space, frame)


def save_operator(a: BlockOperator, path) -> None:
    Path(path).write_text(json.dumps(operator_to_dict(a)) + "\n")


def load_operator(path, cls=BlockOperator) -> BlockOperator:
    return operator_from_dict(json.loads(Path(path).read_text()), cls)
