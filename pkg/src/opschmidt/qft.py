from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import (
    DEFAULT_REL_TOL,
    BipartiteOperator,
    BipartiteShape,
    DomainError,
    SchmidtDecomposition,
    hartley_strength,
    is_maximally_entangled,
    schmidt_decompose,
)


VALUE_MATCH_TOL = 1e-12


class ClassConventionError(RuntimeError):
    pass


@dataclass(frozen=True)
class QftSpec:
    m1: int
    m2: int
    n1: int
    n2: int

    def __post_init__(self) -> None:
        for label, value in (("M1", self.m1), ("M2", self.m2), ("N1", self.n1), ("N2", self.n2)):
            if value < 1:
                raise DomainError(f"{label} must be >= 1, got {value}")
        if self.m1 * self.m2 != self.n1 * self.n2:
            raise DomainError(
                f"M1*M2 = {self.m1 * self.m2} differs from N1*N2 = {self.n1 * self.n2}"
            )

    @property
    def total(self) -> int:
        return self.m1 * self.m2

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(d_a=self.m1, d_b=self.m2, d_ap=self.n1, d_bp=self.n2)

    def as_list(self) -> list[int]:
        return [self.m1, self.m2, self.n1, self.n2]


@dataclass(frozen=True)
class EquivClass:
    base: tuple[int, int]
    members: tuple[tuple[int, int], ...]

    @property
    def cardinality(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CommCostBounds:
    lower: float
    upper: float
    maximal: bool


@dataclass(frozen=True)
class SweepRow:
    spec: QftSpec
    class_count: int
    schmidt_number: int
    max_entangled: bool
    coefficient_values: tuple[tuple[float, int], ...]
    bounds: CommCostBounds
    oracle_schmidt_number: int | None = None
    oracle_max_entangled: bool | None = None
    oracle_coefficient_error: float | None = None

    def agrees_with_oracle(self, tol: float = DEFAULT_REL_TOL) -> bool:
        if self.oracle_schmidt_number is None:
            return True
        return (
            self.oracle_schmidt_number == self.schmidt_number == self.class_count
            and self.oracle_max_entangled == self.max_entangled
            and self.oracle_coefficient_error is not None
            and self.oracle_coefficient_error <= tol
        )


def qft_matrix(spec: QftSpec) -> BipartiteOperator:
    # |l>_{M1}|m>_{M2} <-> |l*M2 + m>, |j>_{N1}|k>_{N2} <-> |j*N2 + k>: a plain N-point DFT matrix.
    n = spec.total
    index = np.arange(n)
    exponent = np.outer(index, index) % n
    return BipartiteOperator(shape=spec.shape, matrix=np.exp(2j * np.pi * exponent / n) / math.sqrt(n))


def equiv_classes(spec: QftSpec) -> list[EquivClass]:
    # Steps (M1, N1) with plain, non-modular addition inside Z_{N2} x Z_{M2}.
    classes = []
    for a in range(min(spec.m1, spec.n2)):
        for b in range(min(spec.n1, spec.m2)):
            members = tuple(
                (s, t) for s in range(a, spec.n2, spec.m1) for t in range(b, spec.m2, spec.n1)
            )
            classes.append(EquivClass(base=(a, b), members=members))
    return classes


def class_coefficient(spec: QftSpec, cls: EquivClass) -> float:
    return math.sqrt(spec.n1 * spec.m1 * cls.cardinality / spec.total)


def class_left_factor(spec: QftSpec, representative: tuple[int, int]) -> np.ndarray:
    s_hat, t_hat = representative
    j = np.arange(spec.n1)[:, None]
    k = np.arange(spec.m1)[None, :]
    exponent = (spec.n2 * spec.m2 * j * k + spec.m2 * k * s_hat + spec.n2 * j * t_hat) % spec.total
    return np.exp(2j * np.pi * exponent / spec.total) / math.sqrt(spec.n1 * spec.m1)


def class_right_factor(spec: QftSpec, cls: EquivClass) -> np.ndarray:
    factor = np.zeros((spec.n2, spec.m2), dtype=complex)
    for j, k in cls.members:
        factor[j, k] = np.exp(2j * np.pi * ((j * k) % spec.total) / spec.total)
    return factor / math.sqrt(cls.cardinality)


def qft_analytic_schmidt(spec: QftSpec) -> SchmidtDecomposition:
    classes = sorted(equiv_classes(spec), key=lambda cls: (-cls.cardinality, cls.base))
    return SchmidtDecomposition(
        coefficients=np.array([class_coefficient(spec, cls) for cls in classes]),
        left_factors=np.array([class_left_factor(spec, cls.base) for cls in classes]),
        right_factors=np.array([class_right_factor(spec, cls) for cls in classes]),
        shape=spec.shape,
    )


def qft_schmidt_number(spec: QftSpec, rel_tol: float = DEFAULT_REL_TOL, check_oracle: bool = True) -> int:
    expected = min(spec.m1 * spec.n1, spec.m2 * spec.n2)
    class_count = len(equiv_classes(spec))
    if class_count != expected:
        raise ClassConventionError(f"{spec.as_list()}: {class_count} classes but min(M1N1, M2N2) = {expected}")
    if check_oracle:
        oracle = schmidt_decompose(qft_matrix(spec), rel_tol).schmidt_number
        if oracle != expected:
            raise ClassConventionError(f"{spec.as_list()}: oracle rank {oracle} but min(M1N1, M2N2) = {expected}")
    return expected


def max_entangled_predicate(spec: QftSpec) -> bool:
    first = spec.n2 % spec.m1 == 0 or spec.m1 > spec.n2
    second = spec.m2 % spec.n1 == 0 or spec.n1 > spec.m2
    return first and second


def qft_is_max_entangled(spec: QftSpec, rel_tol: float = DEFAULT_REL_TOL, check_oracle: bool = False) -> bool:
    predicate = max_entangled_predicate(spec)
    analytic = is_maximally_entangled(qft_analytic_schmidt(spec), rel_tol)
    if analytic != predicate:
        raise ClassConventionError(f"{spec.as_list()}: predicate {predicate} but analytic decomposition says {analytic}")
    if check_oracle:
        oracle = is_maximally_entangled(schmidt_decompose(qft_matrix(spec), rel_tol), rel_tol)
        if oracle != predicate:
            raise ClassConventionError(f"{spec.as_list()}: predicate {predicate} but oracle says {oracle}")
    return predicate


def allowed_coefficient_values(spec: QftSpec) -> list[float]:
    a_plus, a_minus = math.ceil(spec.n2 / spec.m1), spec.n2 // spec.m1
    b_plus, b_minus = math.ceil(spec.m2 / spec.n1), spec.m2 // spec.n1
    products = {a * b for a in (a_plus, a_minus) for b in (b_plus, b_minus) if a * b > 0}
    return sorted((math.sqrt(spec.n1 * spec.m1 * p / spec.total) for p in products), reverse=True)


def qft_coefficient_values(spec: QftSpec) -> list[tuple[float, int]]:
    """Distinct Schmidt coefficients of the QFT with their multiplicities, largest first."""
    multiplicities: dict[int, int] = {}
    for cls in equiv_classes(spec):
        multiplicities[cls.cardinality] = multiplicities.get(cls.cardinality, 0) + 1
    allowed = allowed_coefficient_values(spec)
    values = []
    for cardinality in sorted(multiplicities, reverse=True):
        value = math.sqrt(spec.n1 * spec.m1 * cardinality / spec.total)
        if not any(abs(value - candidate) <= VALUE_MATCH_TOL for candidate in allowed):
            raise ClassConventionError(f"{spec.as_list()}: coefficient {value} outside the a±b± value set")
        values.append((value, multiplicities[cardinality]))
    return values


def operator_comm_cost_bounds(operator: BipartiteOperator, rel_tol: float = DEFAULT_REL_TOL) -> CommCostBounds:
    lower = hartley_strength(schmidt_decompose(operator, rel_tol))
    upper = math.log2(operator.shape.max_schmidt_number)
    return CommCostBounds(lower=lower, upper=upper, maximal=math.isclose(lower, upper, abs_tol=1e-12))


def comm_cost_bounds(spec: QftSpec, rel_tol: float = DEFAULT_REL_TOL, check_oracle: bool = False) -> CommCostBounds:
    if check_oracle:
        qft_schmidt_number(spec, rel_tol, check_oracle=True)
    lower = hartley_strength(qft_analytic_schmidt(spec))
    upper = math.log2(min(spec.m1 * spec.n1, spec.m2 * spec.n2))
    return CommCostBounds(lower=lower, upper=upper, maximal=math.isclose(lower, upper, abs_tol=1e-12))


def communication_operator(d1: int, d2: int, d3: int) -> tuple[BipartiteOperator, SchmidtDecomposition]:
    for label, value in (("d1", d1), ("d2", d2), ("d3", d3)):
        if value < 1:
            raise DomainError(f"{label} must be >= 1, got {value}")
    shape = BipartiteShape(d_a=d1 * d2, d_b=d3, d_ap=d1, d_bp=d2 * d3)
    # (C^d1 ⊗ C^d2) ⊗ C^d3 -> C^d1 ⊗ (C^d2 ⊗ C^d3) is the identity on flat indices.
    operator = BipartiteOperator(shape=shape, matrix=np.eye(d1 * d2 * d3))

    left = np.zeros((d2, d1, d1 * d2))
    right = np.zeros((d2, d2 * d3, d3))
    for k in range(d2):
        for i in range(d1):
            left[k, i, i * d2 + k] = 1.0 / math.sqrt(d1)
        for i in range(d3):
            right[k, k * d3 + i, i] = 1.0 / math.sqrt(d3)
    decomposition = SchmidtDecomposition(
        coefficients=np.full(d2, math.sqrt(d1 * d3)),
        left_factors=left,
        right_factors=right,
        shape=shape,
    )
    return operator, decomposition


def sweep_specs(max_n: int) -> list[QftSpec]:
    specs = []
    for n in range(1, max_n + 1):
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        for m1 in divisors:
            for n1 in divisors:
                specs.append(QftSpec(m1=m1, m2=n // m1, n1=n1, n2=n // n1))
    return specs


def qft_sweep(max_n: int, rel_tol: float = DEFAULT_REL_TOL, with_oracle: bool = True) -> list[SweepRow]:
    rows = []
    for spec in sweep_specs(max_n):
        row = SweepRow(
            spec=spec,
            class_count=len(equiv_classes(spec)),
            schmidt_number=qft_schmidt_number(spec, rel_tol, check_oracle=False),
            max_entangled=qft_is_max_entangled(spec, rel_tol),
            coefficient_values=tuple(qft_coefficient_values(spec)),
            bounds=comm_cost_bounds(spec, rel_tol),
        )
        if with_oracle:
            oracle = schmidt_decompose(qft_matrix(spec), rel_tol)
            analytic = qft_analytic_schmidt(spec)
            error = (
                float(np.max(np.abs(np.sort(oracle.coefficients) - np.sort(analytic.coefficients))))
                if oracle.schmidt_number == analytic.schmidt_number
                else math.inf
            )
            row = replace(
                row,
                oracle_schmidt_number=oracle.schmidt_number,
                oracle_max_entangled=is_maximally_entangled(oracle, rel_tol),
                oracle_coefficient_error=error,
            )
        rows.append(row)
    return rows
