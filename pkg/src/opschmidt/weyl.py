from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_REL_TOL,
    BipartiteOperator,
    BipartiteShape,
    DomainError,
    SchmidtDecomposition,
    ShapeError,
    UndefinedDecompositionError,
    as_square_matrix,
    schmidt_decompose,
)


UNIMODULAR_FLAG_TOL = 1e-12


@dataclass(frozen=True)
class WeylPair:
    n: int
    shift: np.ndarray
    twist: np.ndarray

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.n))

    def relation_residual(self) -> float:
        lhs = self.shift @ self.twist
        rhs = np.conj(self.omega) * self.twist @ self.shift
        identity = np.eye(self.n)
        return float(
            max(
                np.max(np.abs(lhs - rhs)),
                np.max(np.abs(np.linalg.matrix_power(self.shift, self.n) - identity)),
                np.max(np.abs(np.linalg.matrix_power(self.twist, self.n) - identity)),
            )
        )


@dataclass(frozen=True)
class GridFunction:
    """Complex function on Z_N x Z_N stored as an N x N array indexed [alpha, beta]."""

    n: int
    values: np.ndarray
    unimodular: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex)
        if self.n < 1:
            raise DomainError(f"N must be >= 1, got {self.n}")
        if values.size != self.n * self.n:
            raise ShapeError(f"grid function on Z_{self.n}^2 needs {self.n * self.n} values, got {values.size}")
        values = values.reshape(self.n, self.n)
        if not np.all(np.isfinite(values)):
            raise ShapeError("grid function has non-finite values")
        if self.unimodular and not _all_unimodular(values, UNIMODULAR_FLAG_TOL):
            raise DomainError("grid function is flagged unimodular but has values off the unit circle")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def is_unimodular(self, tol: float = UNIMODULAR_FLAG_TOL) -> bool:
        return _all_unimodular(self.values, tol)


@dataclass(frozen=True)
class PhiBasis:
    n: int
    vectors: np.ndarray

    def vector(self, alpha: int, beta: int) -> np.ndarray:
        return self.vectors[alpha * self.n + beta]

    def gram_residual(self) -> float:
        gram = self.vectors.conj() @ self.vectors.T
        return float(np.max(np.abs(gram - np.eye(self.n * self.n))))


def weyl_pair(n: int) -> WeylPair:
    _check_dimension(n)
    shift = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    twist = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    shift.setflags(write=False)
    twist.setflags(write=False)
    return WeylPair(n=n, shift=shift, twist=twist)


def weyl_operator(n: int, a: int, b: int) -> np.ndarray:
    pair = weyl_pair(n)
    return np.linalg.matrix_power(pair.shift, a % n) @ np.linalg.matrix_power(pair.twist, b % n)


def schwinger_basis(n: int) -> np.ndarray:
    """Stack of N^{-1/2} T^alpha R^{-beta}, row-major in (alpha, beta)."""
    pair = weyl_pair(n)
    elements = []
    for alpha in range(n):
        twist_power = np.linalg.matrix_power(pair.twist, alpha)
        for beta in range(n):
            inverse_shift = np.linalg.matrix_power(pair.shift, (-beta) % n)
            elements.append(twist_power @ inverse_shift / math.sqrt(n))
    return np.array(elements)


def vec_iso(a: np.ndarray) -> np.ndarray:
    # |j><k| -> |j> ⊗ conj|k>, i.e. coordinate j*N + k carries A[j, k].
    return as_square_matrix(a).reshape(-1).copy()


def unvec(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = math.isqrt(psi.size)
    if n * n != psi.size or n == 0:
        raise ShapeError(f"vector length {psi.size} is not a positive perfect square")
    return psi.reshape(n, n)


def dft2(grid: GridFunction) -> GridFunction:
    # lambda_hat(a, b) = (1/N) sum exp(+2πi(αa + βb)/N) lambda(α, β)
    return GridFunction(n=grid.n, values=np.fft.ifft2(grid.values, norm="ortho"))


def idft2(grid: GridFunction) -> GridFunction:
    return GridFunction(n=grid.n, values=np.fft.fft2(grid.values, norm="ortho"))


def phi_basis(n: int) -> PhiBasis:
    vectors = np.array([vec_iso(element) for element in schwinger_basis(n)])
    vectors.setflags(write=False)
    return PhiBasis(n=n, vectors=vectors)


def diag_from_lambda(grid: GridFunction) -> BipartiteOperator:
    columns = phi_basis(grid.n).vectors.T
    matrix = (columns * grid.values.reshape(-1)) @ columns.conj().T
    return BipartiteOperator(shape=BipartiteShape.square(grid.n), matrix=matrix)


def analytic_schmidt(grid: GridFunction, rel_tol: float = DEFAULT_REL_TOL) -> SchmidtDecomposition:
    if not rel_tol > 0.0:
        raise DomainError(f"relative tolerance must be positive, got {rel_tol!r}")
    n = grid.n
    transform = dft2(grid).values
    magnitudes = np.abs(transform)
    largest = float(magnitudes.max())
    if largest == 0.0:
        raise UndefinedDecompositionError("lambda is identically zero; D has no Schmidt decomposition")

    support = [(a, b) for a in range(n) for b in range(n) if magnitudes[a, b] > rel_tol * largest]
    # Degenerate magnitudes keep lexicographic (a, b) order.
    support.sort(key=lambda ab: (-round(magnitudes[ab] / largest, 12), ab))

    coefficients = []
    left = []
    right = []
    for a, b in support:
        element = weyl_operator(n, a, b) / math.sqrt(n)
        value = transform[a, b]
        coefficients.append(abs(value))
        left.append(value / abs(value) * element)
        right.append(element.conj())
    return SchmidtDecomposition(
        coefficients=np.array(coefficients),
        left_factors=np.array(left),
        right_factors=np.array(right),
        shape=BipartiteShape.square(n),
    )


@dataclass(frozen=True)
class OracleComparison:
    grid: GridFunction
    operator: BipartiteOperator
    analytic: SchmidtDecomposition
    oracle: SchmidtDecomposition

    @property
    def ranks_agree(self) -> bool:
        return self.analytic.schmidt_number == self.oracle.schmidt_number

    @property
    def max_coefficient_error(self) -> float:
        if not self.ranks_agree:
            return math.inf
        difference = self.analytic.sorted_coefficients() - self.oracle.sorted_coefficients()
        return float(np.max(np.abs(difference)))

    def agrees(self, tol: float = DEFAULT_REL_TOL) -> bool:
        scale = max(1.0, float(self.oracle.coefficients.max()))
        return self.ranks_agree and self.max_coefficient_error <= tol * scale


def compare_with_oracle(grid: GridFunction, rel_tol: float = DEFAULT_REL_TOL) -> OracleComparison:
    operator = diag_from_lambda(grid)
    return OracleComparison(
        grid=grid,
        operator=operator,
        analytic=analytic_schmidt(grid, rel_tol),
        oracle=schmidt_decompose(operator, rel_tol),
    )


def swap_decomposition(n: int) -> SchmidtDecomposition:
    """SWAP = sum_j A_j ⊗ A_j^dagger over the Schwinger basis of B(C^N)."""
    basis = schwinger_basis(n)
    return SchmidtDecomposition(
        coefficients=np.ones(n * n),
        left_factors=basis,
        right_factors=np.conj(np.transpose(basis, (0, 2, 1))),
        shape=BipartiteShape.square(n),
    )


def lambda_from_phases(theta: np.ndarray) -> GridFunction:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise ShapeError(f"phase table must be square, got shape {theta.shape}")
    return GridFunction(n=theta.shape[0], values=np.exp(1j * theta), unimodular=True)


def random_unimodular(n: int, rng: np.random.Generator) -> GridFunction:
    _check_dimension(n)
    return lambda_from_phases(rng.uniform(0.0, 2.0 * np.pi, size=(n, n)))


def _check_dimension(n: int) -> None:
    if n < 1:
        raise DomainError(f"dimension N must be >= 1, got {n}")


def _all_unimodular(values: np.ndarray, tol: float) -> bool:
    return bool(np.all(np.abs(np.abs(values) - 1.0) <= tol))
