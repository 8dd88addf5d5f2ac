"""JSON codecs shared by the file formats.

Complex matrices are stored as nested rows of [re, im] pairs; floats go
through Python's repr, so a save/load round trip is exact at double
precision.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .operators import DimVector, HermitianOperator


class SchemaError(ValueError):
    """A file does not match the expected schema; the message names the field."""


def matrix_to_json(mat: np.ndarray) -> list:
    mat = np.asarray(mat, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in mat]


def matrix_from_json(data: Any, field: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{field}: expected a non-empty list of rows")
    side = len(data)
    out = np.empty((side, side), dtype=np.complex128)
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != side:
            raise SchemaError(f"{field}[{r}]: expected a row of {side} entries")
        for c, cell in enumerate(row):
            if (
                not isinstance(cell, (list, tuple))
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) for v in cell)
            ):
                raise SchemaError(f"{field}[{r}][{c}]: expected an [re, im] pair")
            out[r, c] = complex(cell[0], cell[1])
    return out


def dims_from_json(data: Any, field: str = "dims") -> DimVector:
    if not isinstance(data, list) or not data or not all(isinstance(d, int) and d > 0 for d in data):
        raise SchemaError(f"{field}: expected a list of positive integers")
    return DimVector(tuple(data))


def operator_to_dict(op: HermitianOperator) -> dict:
    return {"dims": list(op.dims.dims), "matrix": matrix_to_json(op.matrix)}


def operator_from_dict(data: Any, field: str = "operator") -> HermitianOperator:
    if not isinstance(data, dict):
        raise SchemaError(f"{field}: expected an object")
    dims = dims_from_json(data.get("dims"), f"{field}.dims")
    mat = matrix_from_json(data.get("matrix"), f"{field}.matrix")
    try:
        return HermitianOperator(mat, dims)
    except ValueError as exc:
        raise SchemaError(f"{field}: {exc}") from exc


def write_json(path: Union[str, Path], payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_json(path: Union[str, Path]) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def save_certificate(op: HermitianOperator, path: Union[str, Path]) -> None:
    write_json(path, operator_to_dict(op))


def load_certificate(path: Union[str, Path]) -> HermitianOperator:
    return operator_from_dict(read_json(path), field=str(path))
