from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


DEFAULT_REL_TOL = 1e-9


class ShapeError(ValueError):
    pass


class DomainError(ValueError):
    pass


class UndefinedDecompositionError(ValueError):
    pass


def as_complex_matrix(value: object, *, name: str = "matrix") -> np.ndarray:
    try:
        array = np.array(value, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{name} is not a complex matrix: {exc}") from exc
    if array.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ShapeError(f"{name} has non-finite entries")
    array.setflags(write=False)
    return array


def as_square_matrix(value: object, *, name: str = "matrix") -> np.ndarray:
    array = as_complex_matrix(value, name=name)
    if array.shape[0] != array.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {array.shape}")
    return array


@dataclass(frozen=True)
class BipartiteShape:
    d_a: int
    d_b: int
    d_ap: int
    d_bp: int

    def __post_init__(self) -> None:
        for label, value in self.as_dict().items():
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
                raise ShapeError(f"{label} must be a positive integer, got {value!r}")

    @classmethod
    def square(cls, d_a: int, d_b: int | None = None) -> BipartiteShape:
        d_b = d_a if d_b is None else d_b
        return cls(d_a=d_a, d_b=d_b, d_ap=d_a, d_bp=d_b)

    @property
    def rows(self) -> int:
        return self.d_ap * self.d_bp

    @property
    def cols(self) -> int:
        return self.d_a * self.d_b

    @property
    def max_schmidt_number(self) -> int:
        return min(self.d_a * self.d_ap, self.d_b * self.d_bp)

    def as_dict(self) -> dict[str, int]:
        return {"d_a": self.d_a, "d_b": self.d_b, "d_ap": self.d_ap, "d_bp": self.d_bp}

    def as_list(self) -> list[int]:
        return [self.d_a, self.d_b, self.d_ap, self.d_bp]


@dataclass(frozen=True)
class BipartiteOperator:
    """A matrix A⊗B -> A'⊗B' with row index a'*dBp + b' and column index a*dB + b."""

    shape: BipartiteShape
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = as_complex_matrix(self.matrix)
        if matrix.shape != (self.shape.rows, self.shape.cols):
            raise ShapeError(
                f"matrix shape {matrix.shape} does not match dims {self.shape.as_list()} "
                f"(expected {(self.shape.rows, self.shape.cols)})"
            )
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_factors(cls, left: np.ndarray, right: np.ndarray) -> BipartiteOperator:
        left = as_complex_matrix(left, name="left factor")
        right = as_complex_matrix(right, name="right factor")
        shape = BipartiteShape(
            d_a=left.shape[1],
            d_b=right.shape[1],
            d_ap=left.shape[0],
            d_bp=right.shape[0],
        )
        return cls(shape=shape, matrix=np.kron(left, right))

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_factors: np.ndarray
    right_factors: np.ndarray
    shape: BipartiteShape

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=float).reshape(-1)
        left = np.array(self.left_factors, dtype=complex)
        right = np.array(self.right_factors, dtype=complex)
        count = coefficients.size
        if count == 0:
            raise UndefinedDecompositionError("a decomposition needs at least one coefficient")
        if np.any(coefficients <= 0.0):
            raise DomainError("Schmidt coefficients must be positive")
        if left.shape != (count, self.shape.d_ap, self.shape.d_a):
            raise ShapeError(f"left factors have shape {left.shape}, expected {(count, self.shape.d_ap, self.shape.d_a)}")
        if right.shape != (count, self.shape.d_bp, self.shape.d_b):
            raise ShapeError(f"right factors have shape {right.shape}, expected {(count, self.shape.d_bp, self.shape.d_b)}")
        if count > self.shape.max_schmidt_number:
            raise ShapeError(f"{count} terms exceed the maximal Schmidt number {self.shape.max_schmidt_number}")
        for array in (coefficients, left, right):
            array.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "left_factors", left)
        object.__setattr__(self, "right_factors", right)

    @property
    def schmidt_number(self) -> int:
        return int(self.coefficients.size)

    def sorted_coefficients(self) -> np.ndarray:
        return np.sort(self.coefficients)[::-1]

    def reconstruct(self) -> BipartiteOperator:
        tensor = np.einsum("k,kij,klm->iljm", self.coefficients, self.left_factors, self.right_factors)
        matrix = tensor.reshape(self.shape.rows, self.shape.cols)
        return BipartiteOperator(shape=self.shape, matrix=matrix)


def realign(operator: BipartiteOperator) -> np.ndarray:
    """Permute F[(a'b'),(ab)] into M[(a'a),(b'b)] so the operator-Schmidt form is an SVD of M."""
    shape = operator.shape
    tensor = operator.matrix.reshape(shape.d_ap, shape.d_bp, shape.d_a, shape.d_b)
    return tensor.transpose(0, 2, 1, 3).reshape(shape.d_ap * shape.d_a, shape.d_bp * shape.d_b)


def realigned_singular_values(operator: BipartiteOperator) -> np.ndarray:
    return np.linalg.svd(realign(operator), compute_uv=False)


def schmidt_decompose(operator: BipartiteOperator, rel_tol: float = DEFAULT_REL_TOL) -> SchmidtDecomposition:
    _check_rel_tol(rel_tol)
    if not np.any(operator.matrix):
        raise UndefinedDecompositionError("the zero operator has no Schmidt decomposition")

    shape = operator.shape
    u, s, vh = np.linalg.svd(realign(operator), full_matrices=False)
    keep = s > rel_tol * s[0]
    left = u[:, keep].T.reshape(-1, shape.d_ap, shape.d_a)
    right = vh[keep, :].reshape(-1, shape.d_bp, shape.d_b)
    return SchmidtDecomposition(coefficients=s[keep], left_factors=left, right_factors=right, shape=shape)


def schmidt_number(operator: BipartiteOperator, rel_tol: float = DEFAULT_REL_TOL) -> int:
    return schmidt_decompose(operator, rel_tol).schmidt_number


def hartley_strength(decomposition: SchmidtDecomposition) -> float:
    return math.log2(decomposition.schmidt_number)


def schmidt_strength(decomposition: SchmidtDecomposition) -> float:
    squares = decomposition.coefficients**2
    p = squares / squares.sum()
    return 0.0 - float(np.sum(p * np.log2(p)))


def is_maximally_entangled(decomposition: SchmidtDecomposition, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    _check_rel_tol(rel_tol)
    if decomposition.schmidt_number != decomposition.shape.max_schmidt_number:
        return False
    coefficients = decomposition.coefficients
    return bool(coefficients.max() / coefficients.min() - 1.0 <= rel_tol)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def reconstruction_residual(operator: BipartiteOperator, decomposition: SchmidtDecomposition) -> float:
    difference = operator.matrix - decomposition.reconstruct().matrix
    return float(np.linalg.norm(difference) / operator.hs_norm())


def orthonormality_residual(decomposition: SchmidtDecomposition) -> float:
    residuals = []
    for factors in (decomposition.left_factors, decomposition.right_factors):
        flat = factors.reshape(factors.shape[0], -1)
        gram = flat.conj() @ flat.T
        residuals.append(float(np.max(np.abs(gram - np.eye(flat.shape[0])))))
    return max(residuals)


def unitarity_residual(matrix: np.ndarray) -> float:
    matrix = as_square_matrix(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


def swap_operator(n: int) -> BipartiteOperator:
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    matrix = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            matrix[b * n + a, a * n + b] = 1.0
    return BipartiteOperator(shape=BipartiteShape.square(n), matrix=matrix)


def identity_operator(d_a: int, d_b: int) -> BipartiteOperator:
    return BipartiteOperator(shape=BipartiteShape.square(d_a, d_b), matrix=np.eye(d_a * d_b))


def vector_as_operator(psi: np.ndarray, d_a: int, d_b: int) -> BipartiteOperator:
    # A vector in C^dA ⊗ C^dB is a map C^1 ⊗ C^1 -> C^dA ⊗ C^dB.
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d_a * d_b:
        raise ShapeError(f"vector of length {psi.size} does not split as {d_a} x {d_b}")
    return BipartiteOperator(shape=BipartiteShape(d_a=1, d_b=1, d_ap=d_a, d_bp=d_b), matrix=psi.reshape(-1, 1))


def random_complex_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(random_complex_matrix(n, n, rng))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def _check_rel_tol(rel_tol: float) -> None:
    if not rel_tol > 0.0:
        raise DomainError(f"relative tolerance must be positive, got {rel_tol!r}")
