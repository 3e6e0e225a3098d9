from __future__ import annotations

import json
from pathlib import Path
from typing import TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from .biunimodular import LineFunction
from .linalg import BipartiteOperator, BipartiteShape, SchmidtDecomposition, as_complex_matrix
from .models import (
    BipartiteOperatorPayload,
    DecompositionPayload,
    GridFunctionPayload,
    LineFunctionPayload,
    MatrixPayload,
)
from .weyl import GridFunction


PayloadT = TypeVar("PayloadT", bound=BaseModel)


class MatrixFileError(RuntimeError):
    pass


def validate_input_json_path(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    if not path.is_file():
        raise IsADirectoryError(f"Path is not a file: {path}")
    if path.suffix.lower() != ".json":
        raise ValueError(f"Expected a .json file, got: {path.name}")
    return path


def load_matrix(path: Path) -> np.ndarray:
    payload = _load_payload(path, MatrixPayload)
    return _pairs_to_array(payload.data).reshape(payload.rows, payload.cols)


def load_bipartite_operator(path: Path) -> BipartiteOperator:
    payload = _load_payload(path, BipartiteOperatorPayload)
    d_a, d_b, d_ap, d_bp = payload.dims
    return BipartiteOperator(
        shape=BipartiteShape(d_a=d_a, d_b=d_b, d_ap=d_ap, d_bp=d_bp),
        matrix=_pairs_to_array(payload.data).reshape(payload.rows, payload.cols),
    )


def load_grid_function(path: Path) -> GridFunction:
    payload = _load_payload(path, GridFunctionPayload)
    return GridFunction(n=payload.n, values=_pairs_to_array(payload.values))


def load_line_function(path: Path) -> LineFunction:
    payload = _load_payload(path, LineFunctionPayload)
    return LineFunction(n=payload.n, values=_pairs_to_array(payload.values))


def matrix_to_payload(matrix: np.ndarray) -> MatrixPayload:
    matrix = as_complex_matrix(matrix)
    rows, cols = matrix.shape
    return MatrixPayload(rows=rows, cols=cols, data=_array_to_pairs(matrix))


def operator_to_payload(operator: BipartiteOperator) -> BipartiteOperatorPayload:
    shape = operator.shape
    return BipartiteOperatorPayload(
        rows=shape.rows,
        cols=shape.cols,
        dims=(shape.d_a, shape.d_b, shape.d_ap, shape.d_bp),
        data=_array_to_pairs(operator.matrix),
    )


def decomposition_to_payload(decomposition: SchmidtDecomposition) -> DecompositionPayload:
    return DecompositionPayload(
        coefficients=[float(c) for c in decomposition.coefficients],
        left=[matrix_to_payload(factor) for factor in decomposition.left_factors],
        right=[matrix_to_payload(factor) for factor in decomposition.right_factors],
    )


def grid_to_payload(grid: GridFunction) -> GridFunctionPayload:
    return GridFunctionPayload(n=grid.n, values=_array_to_pairs(grid.values))


def line_to_payload(function: LineFunction) -> LineFunctionPayload:
    return LineFunctionPayload(n=function.n, values=_array_to_pairs(function.values))


def write_payload(payload: BaseModel, path: Path) -> Path:
    text = json.dumps(payload.model_dump(by_alias=True), indent=2, ensure_ascii=True)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def _load_payload(path: Path, model: type[PayloadT]) -> PayloadT:
    validated = validate_input_json_path(path)
    try:
        text = validated.read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"Failed to read '{validated}': {exc}") from exc

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{validated}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc

    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in exc.errors()
        )
        raise MatrixFileError(f"{validated}: invalid {model.__name__}: {problems}") from exc


def _pairs_to_array(pairs: list[tuple[float, float]]) -> np.ndarray:
    array = np.array(pairs, dtype=float).reshape(-1, 2)
    return array[:, 0] + 1j * array[:, 1]


def _array_to_pairs(values: np.ndarray) -> list[tuple[float, float]]:
    flat = np.asarray(values, dtype=complex).reshape(-1)
    return [(float(z.real), float(z.imag)) for z in flat]
