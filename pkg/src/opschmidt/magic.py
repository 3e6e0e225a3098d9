from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np

from .linalg import (
    DEFAULT_REL_TOL,
    DomainError,
    ShapeError,
    as_square_matrix,
    hs_inner,
    random_complex_matrix,
    random_unitary,
    realigned_singular_values,
    vector_as_operator,
)
from .weyl import unvec, vec_iso


FINITE_DIFFERENCE_TOL = 1e-5
MULTIPLICATIVITY_TOL = 1e-8
EXACT_TOL = 1e-12
SEPARABLE_TOL = 1e-10
ENTANGLED_FLOOR = 1e-6
DEFAULT_SPHERE_SAMPLES = 10_000

# Two-qubit vectors fixed by D, as matrices under vec_iso.
INVARIANT_MATRICES = (
    np.eye(2, dtype=complex),
    np.diag([1j, -1j]),
    np.array([[0, 1j], [1j, 0]]),
    np.array([[0, 1], [-1, 0]], dtype=complex),
)


@dataclass(frozen=True)
class DetGradientResult:
    input: np.ndarray
    gradient: np.ndarray

    @classmethod
    def of(cls, a: np.ndarray) -> DetGradientResult:
        matrix = as_square_matrix(a)
        return cls(input=matrix, gradient=det_gradient(matrix))

    @property
    def n(self) -> int:
        return int(self.input.shape[0])

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.input))

    def pairing(self) -> complex:
        # <G(A), A>_HS = N det A
        return hs_inner(self.gradient, self.input)


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    max_residual: float
    threshold: float
    samples: int
    detail: str = ""


@dataclass(frozen=True)
class PropertyReport:
    n: int
    trials: int
    seed: int
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> PropertyCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)


def det_gradient(a: np.ndarray) -> np.ndarray:
    """Conjugated cofactor matrix, i.e. adj(A)^dagger, defined for singular A as well."""
    matrix = as_square_matrix(a)
    gradient = _gradient_stack(matrix[np.newaxis])[0]
    gradient.setflags(write=False)
    return gradient


def d_map(psi: np.ndarray) -> np.ndarray:
    return vec_iso(det_gradient(unvec(psi)))


def maximal_d_norm(n: int) -> float:
    # ||D psi|| at a maximally entangled unit psi = vec(U)/sqrt(N).
    return n ** (-(n - 1) / 2) * math.sqrt(n)


def check_properties(
    n: int,
    trials: int = 100,
    seed: int = 0,
    sphere_samples: int = DEFAULT_SPHERE_SAMPLES,
    rel_tol: float = DEFAULT_REL_TOL,
) -> PropertyReport:
    if n < 1:
        raise DomainError(f"dimension N must be >= 1, got {n}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if sphere_samples < 1:
        raise DomainError(f"sphere samples must be >= 1, got {sphere_samples}")
    if not rel_tol > 0.0:
        raise DomainError(f"relative tolerance must be positive, got {rel_tol!r}")

    rng = np.random.default_rng(seed)
    checks = [
        _check_gradient_formula(n, trials, rng, rel_tol),
        _check_finite_differences(n, trials, rng),
        _check_pairing(n, trials, rng, rel_tol),
        _check_multiplicativity(n, trials, rng),
        _check_adjoint(n, trials, rng, rel_tol),
        _check_intertwining(n, trials, rng, rel_tol),
        _check_homogeneity(n, trials, rng, rel_tol),
        _check_parallel_iff_maximal(n, trials, rng, rel_tol),
        _check_schmidt_product(n, trials, rng, rel_tol),
    ]
    if n >= 3:
        checks.append(_check_sphere_maximum(n, sphere_samples, rng, rel_tol))
    if n == 2:
        checks.extend(
            [
                _check_antiunitary(trials, rng),
                _check_involution(trials, rng),
                _check_invariant_vectors(),
                _check_separability(trials, rng),
                _check_polar_form(trials, rng, rel_tol),
                _check_schmidt_preservation(trials, rng, rel_tol),
            ]
        )
    return PropertyReport(n=n, trials=trials, seed=seed, checks=tuple(checks))


def _gradient_stack(stack: np.ndarray) -> np.ndarray:
    n = stack.shape[-1]
    if stack.shape[-2] != n:
        raise ShapeError(f"expected square matrices, got trailing shape {stack.shape[-2:]}")
    if n == 1:
        return np.ones_like(stack, dtype=complex)
    keep = np.array([np.delete(np.arange(n), i) for i in range(n)])
    # minors[..., i, j] is the matrix with row i and column j removed
    minors = stack[..., keep[:, None, :, None], keep[None, :, None, :]]
    signs = (-1.0) ** np.add.outer(np.arange(n), np.arange(n))
    return np.conj(signs * np.linalg.det(minors))


def _check(
    name: str,
    residuals: Iterable[float],
    threshold: float,
    detail: str = "",
) -> PropertyCheck:
    values = np.array(list(residuals), dtype=float)
    worst = float(np.max(values)) if values.size else 0.0
    passed = bool(values.size and np.all(np.isfinite(values)) and worst <= threshold)
    return PropertyCheck(
        name=name,
        passed=passed,
        max_residual=worst,
        threshold=threshold,
        samples=int(values.size),
        detail=detail,
    )


def _relative(difference: np.ndarray, scale: float) -> float:
    return float(np.linalg.norm(difference) / max(scale, np.finfo(float).tiny))


def _trials(trials: int, sample: Callable[[], float]) -> list[float]:
    return [sample() for _ in range(trials)]


def _check_gradient_formula(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(n, n, rng)
        expected = np.conj(np.linalg.det(a) * np.linalg.inv(a)).T
        return _relative(det_gradient(a) - expected, float(np.linalg.norm(expected)))

    return _check("gradient-formula", _trials(trials, sample), rel_tol)


def _check_finite_differences(n: int, trials: int, rng: np.random.Generator) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(n, n, rng)
        direction = random_complex_matrix(n, n, rng)
        step = 1e-6 * float(np.linalg.norm(a))
        numeric = (np.linalg.det(a + step * direction) - np.linalg.det(a - step * direction)) / (2.0 * step)
        gradient = det_gradient(a)
        scale = float(np.linalg.norm(gradient) * np.linalg.norm(direction))
        return abs(numeric - hs_inner(gradient, direction)) / scale

    return _check("finite-difference", _trials(trials, sample), FINITE_DIFFERENCE_TOL)


def _check_pairing(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        result = DetGradientResult.of(random_complex_matrix(n, n, rng))
        scale = float(np.linalg.norm(result.gradient) * np.linalg.norm(result.input))
        return abs(result.pairing() - n * result.determinant) / scale

    return _check("hs-pairing", _trials(trials, sample), rel_tol)


def _check_multiplicativity(n: int, trials: int, rng: np.random.Generator) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(n, n, rng)
        b = random_complex_matrix(n, n, rng)
        ga, gb = det_gradient(a), det_gradient(b)
        return _relative(det_gradient(a @ b) - ga @ gb, float(np.linalg.norm(ga) * np.linalg.norm(gb)))

    return _check("multiplicativity", _trials(trials, sample), MULTIPLICATIVITY_TOL)


def _check_adjoint(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(n, n, rng)
        gradient = det_gradient(a)
        return _relative(det_gradient(a.conj().T) - gradient.conj().T, float(np.linalg.norm(gradient)))

    return _check("adjoint", _trials(trials, sample), rel_tol)


def _check_intertwining(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(n, n, rng)
        b = random_complex_matrix(n, n, rng)
        psi = random_complex_matrix(n * n, 1, rng).reshape(-1)
        lhs = d_map(np.kron(a, b.conj()) @ psi)
        rhs = np.kron(det_gradient(a), det_gradient(b).conj()) @ d_map(psi)
        return _relative(lhs - rhs, float(np.linalg.norm(rhs)))

    return _check("intertwining", _trials(trials, sample), rel_tol)


def _check_homogeneity(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        psi = random_complex_matrix(n * n, 1, rng).reshape(-1)
        c = complex(rng.standard_normal(), rng.standard_normal())
        expected = np.conj(c) ** (n - 1) * d_map(psi)
        return _relative(d_map(c * psi) - expected, float(np.linalg.norm(expected)))

    return _check("homogeneity", _trials(trials, sample), rel_tol)


def _parallel_residual(psi: np.ndarray) -> float:
    image = d_map(psi)
    projected = image - np.vdot(psi, image) * psi
    return _relative(projected, float(np.linalg.norm(image)))


def _maximally_entangled_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    return vec_iso(random_unitary(n, rng)) / math.sqrt(n)


def _unequal_schmidt_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    values = rng.uniform(0.2, 1.0, size=n)
    values[0], values[-1] = 1.0, 0.5
    a = random_unitary(n, rng) @ np.diag(values) @ random_unitary(n, rng)
    psi = vec_iso(a)
    return psi / np.linalg.norm(psi)


def _check_parallel_iff_maximal(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    maximal = _trials(trials, lambda: _parallel_residual(_maximally_entangled_unit(n, rng)))
    if n == 1:
        return _check("parallel-iff-maximal", maximal, rel_tol, detail="every unit vector is maximally entangled")
    others = _trials(trials, lambda: _parallel_residual(_unequal_schmidt_unit(n, rng)))
    separation = min(others)
    check = _check(
        "parallel-iff-maximal",
        maximal,
        rel_tol,
        detail=f"smallest residual over non-maximal samples {separation:.3e}",
    )
    if separation <= ENTANGLED_FLOOR:
        return replace(check, passed=False)
    return check


def _check_sphere_maximum(n: int, samples: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    bound = maximal_d_norm(n)
    attained = [float(np.linalg.norm(d_map(_maximally_entangled_unit(n, rng)))) for _ in range(8)]
    vectors = rng.standard_normal((samples, n * n)) + 1j * rng.standard_normal((samples, n * n))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    images = _gradient_stack(vectors.reshape(samples, n, n)).reshape(samples, -1)
    largest = float(np.max(np.linalg.norm(images, axis=1)))
    residuals = [abs(value - bound) / bound for value in attained]
    residuals.append(max(0.0, largest - bound) / bound)
    return _check(
        "sphere-maximum",
        residuals,
        rel_tol,
        detail=f"maximally entangled norm {bound:.6f}, largest random norm {largest:.6f}",
    )


def _check_schmidt_product(n: int, trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample(rank: int) -> float:
        a = random_complex_matrix(n, rank, rng) @ random_complex_matrix(rank, n, rng)
        psi = vec_iso(a)
        product = float(np.prod(realigned_singular_values(vector_as_operator(psi, n, n))))
        pairing = abs(np.vdot(psi, d_map(psi))) / n
        return abs(product - pairing) / max(product, pairing, 1.0)

    residuals = _trials(trials, lambda: sample(n))
    if n > 1:
        residuals.extend(_trials(max(1, trials // 10), lambda: sample(n - 1)))
    return _check("schmidt-product", residuals, rel_tol)


def _check_antiunitary(trials: int, rng: np.random.Generator) -> PropertyCheck:
    def sample() -> float:
        a = random_complex_matrix(2, 2, rng)
        b = random_complex_matrix(2, 2, rng)
        c, d = (complex(rng.standard_normal(), rng.standard_normal()) for _ in range(2))
        ga, gb = det_gradient(a), det_gradient(b)
        linear = det_gradient(c * a + d * b) - (np.conj(c) * ga + np.conj(d) * gb)
        scale = float(np.linalg.norm(a) * np.linalg.norm(b))
        inner = abs(hs_inner(ga, gb) - hs_inner(b, a)) / scale
        return max(_relative(linear, float(abs(c) * np.linalg.norm(a) + abs(d) * np.linalg.norm(b))), inner)

    return _check("antiunitary", _trials(trials, sample), EXACT_TOL)


def _check_involution(trials: int, rng: np.random.Generator) -> PropertyCheck:
    def sample() -> float:
        psi = random_complex_matrix(4, 1, rng).reshape(-1)
        return _relative(d_map(d_map(psi)) - psi, float(np.linalg.norm(psi)))

    return _check("involution", _trials(trials, sample), EXACT_TOL)


def _check_invariant_vectors() -> PropertyCheck:
    vectors = np.array([vec_iso(matrix) for matrix in INVARIANT_MATRICES])
    residuals = [float(np.max(np.abs(d_map(psi) - psi))) for psi in vectors]
    basis = vectors / math.sqrt(2)
    gram = basis.conj() @ basis.T
    residuals.append(float(np.max(np.abs(gram - np.eye(4)))))
    return _check("invariant-vectors", residuals, EXACT_TOL, detail="four fixed vectors, orthonormal after 1/sqrt(2)")


def _check_separability(trials: int, rng: np.random.Generator) -> PropertyCheck:
    def product() -> float:
        u = random_complex_matrix(2, 1, rng)
        v = random_complex_matrix(2, 1, rng)
        psi = np.kron(u, v).reshape(-1)
        psi /= np.linalg.norm(psi)
        return float(abs(np.vdot(psi, d_map(psi))))

    def generic() -> float:
        psi = random_complex_matrix(4, 1, rng).reshape(-1)
        psi /= np.linalg.norm(psi)
        return float(abs(np.vdot(psi, d_map(psi))))

    separable = _trials(trials, product)
    entangled = min(_trials(trials, generic))
    check = _check(
        "separability",
        separable,
        SEPARABLE_TOL,
        detail=f"smallest |<psi, D psi>| over entangled samples {entangled:.3e}",
    )
    if entangled <= ENTANGLED_FLOOR:
        return replace(check, passed=False)
    return check


def _check_polar_form(trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        u = random_unitary(2, rng)
        u = u / np.sqrt(np.linalg.det(u))
        w = random_unitary(2, rng)
        lam1, lam2 = rng.uniform(0.1, 2.0, size=2)
        p = w @ np.diag([lam1, lam2]) @ w.conj().T
        a = np.exp(1j * theta) * u @ p
        expected = np.exp(-1j * theta) * u @ w @ np.diag([lam2, lam1]) @ w.conj().T
        return _relative(det_gradient(a) - expected, float(np.linalg.norm(a)))

    return _check("polar-form", _trials(trials, sample), rel_tol)


def _check_schmidt_preservation(trials: int, rng: np.random.Generator, rel_tol: float) -> PropertyCheck:
    def sample() -> float:
        psi = random_complex_matrix(4, 1, rng).reshape(-1)
        before = np.sort(realigned_singular_values(vector_as_operator(psi, 2, 2)))
        after = np.sort(realigned_singular_values(vector_as_operator(d_map(psi), 2, 2)))
        return float(np.max(np.abs(after - before)) / np.max(before))

    return _check("schmidt-preservation", _trials(trials, sample), rel_tol)
