from __future__ import annotations

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator, model_validator


ComplexPair = tuple[FiniteFloat, FiniteFloat]
OutputFormat = Literal["json", "text"]
CatalogConstruction = Literal["tensor-product", "table", "explicit-unitary"]


class MatrixPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    data: list[ComplexPair]

    @model_validator(mode="after")
    def _check_entry_count(self) -> MatrixPayload:
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"data holds {len(self.data)} entries, rows*cols = {self.rows * self.cols}")
        return self


class BipartiteOperatorPayload(MatrixPayload):
    dims: tuple[int, int, int, int]

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, value: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
        if any(d < 1 for d in value):
            raise ValueError("dims must all be >= 1")
        return value

    @model_validator(mode="after")
    def _check_dims(self) -> BipartiteOperatorPayload:
        d_a, d_b, d_ap, d_bp = self.dims
        if (self.rows, self.cols) != (d_ap * d_bp, d_a * d_b):
            raise ValueError(
                f"dims {list(self.dims)} need a {d_ap * d_bp}x{d_a * d_b} matrix, got {self.rows}x{self.cols}"
            )
        return self


class DecompositionPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coefficients: list[float]
    left: list[MatrixPayload]
    right: list[MatrixPayload]

    @model_validator(mode="after")
    def _check_lengths(self) -> DecompositionPayload:
        if not len(self.coefficients) == len(self.left) == len(self.right):
            raise ValueError("coefficients, left and right must have the same length")
        return self


class GridFunctionPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n: int = Field(alias="N", ge=1)
    values: list[ComplexPair]

    @model_validator(mode="after")
    def _check_value_count(self) -> GridFunctionPayload:
        if len(self.values) != self.n * self.n:
            raise ValueError(f"a grid function on Z_{self.n}^2 needs {self.n * self.n} values, got {len(self.values)}")
        return self


class LineFunctionPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n: int = Field(alias="N", ge=1)
    values: list[ComplexPair]

    @model_validator(mode="after")
    def _check_value_count(self) -> LineFunctionPayload:
        if len(self.values) != self.n:
            raise ValueError(f"a function on Z_{self.n} needs {self.n} values, got {len(self.values)}")
        return self


class SchmidtReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: list[int]
    schmidt_number: int = Field(ge=1)
    coefficients: list[float]
    hartley_strength: float = Field(ge=0.0)
    schmidt_strength: float = Field(ge=0.0)
    maximally_entangled: bool
    reconstruction_residual: float = Field(ge=0.0)
    orthonormality_residual: float = Field(ge=0.0)
    decomposition: DecompositionPayload | None = None


class WeylReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    lambda_hat: GridFunctionPayload
    analytic_coefficients: list[float]
    oracle_coefficients: list[float]
    max_coefficient_error: float
    agrees_with_oracle: bool
    unitary: bool
    maximally_entangled: bool


class CatalogRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: int = Field(ge=1, le=9)
    construction: CatalogConstruction
    coefficients: list[float]
    unitarity_residual: float = Field(ge=0.0)
    maximally_entangled: bool


class CertificatePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    support: list[tuple[int, int]] = Field(serialization_alias="P")
    v: tuple[int, int]
    x: tuple[int, int]


class CatalogReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rows: list[CatalogRow]
    certificates: list[CertificatePayload] = Field(default_factory=list)


class BiunimodularReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    function: LineFunctionPayload
    biunimodular: bool
    parameters: dict[str, Any] = Field(default_factory=dict)
    lifted_coefficients: list[float] | None = None
    lifted_maximally_entangled: bool | None = None


class CoefficientValue(BaseModel):
    model_config = ConfigDict(extra="forbid")

    value: float = Field(gt=0.0)
    multiplicity: int = Field(ge=1)


class QftClassRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: tuple[int, int]
    cardinality: int = Field(ge=1)
    coefficient: float = Field(gt=0.0)


class CommCostPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lower: float
    upper: float
    maximal: bool


class QftReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: list[int]
    schmidt_number: int = Field(ge=1)
    maximally_entangled: bool
    coefficient_values: list[CoefficientValue]
    classes: list[QftClassRow] | None = None
    coefficients: list[float] | None = None
    bounds: CommCostPayload | None = None


class QftSweepRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: list[int]
    class_count: int = Field(ge=1)
    schmidt_number: int = Field(ge=1)
    maximally_entangled: bool
    coefficient_values: list[CoefficientValue]
    bounds: CommCostPayload
    oracle_schmidt_number: int | None = None
    oracle_maximally_entangled: bool | None = None
    oracle_coefficient_error: float | None = None
    agrees_with_oracle: bool = True


class PropertyCheckPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    max_residual: float
    threshold: float
    samples: int = Field(ge=0)
    detail: str = ""


class PropertyReportPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    trials: int = Field(ge=1)
    seed: int = Field(ge=0)
    passed: bool
    checks: list[PropertyCheckPayload]


class CheckResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    max_residual: float
    detail: str = ""
    elapsed_seconds: float = Field(ge=0.0)

    @field_validator("max_residual")
    @classmethod
    def _nan_is_infinite(cls, value: float) -> float:
        return math.inf if math.isnan(value) else value


class AcceptanceReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rel_tol: float = Field(gt=0.0)
    seed: int = Field(ge=0)
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
