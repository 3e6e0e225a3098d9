from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np

from .linalg import (
    DEFAULT_REL_TOL,
    BipartiteOperator,
    BipartiteShape,
    DomainError,
    is_maximally_entangled,
    schmidt_decompose,
    unitarity_residual,
)
from .weyl import GridFunction, analytic_schmidt, diag_from_lambda, dft2, weyl_pair


Construction = Literal["tensor-product", "table", "explicit-unitary"]
Point = tuple[int, int]

OMEGA = complex(np.exp(2j * np.pi / 3))
G3 = (1.0, 1.0, OMEGA)

_W = OMEGA
_W2 = OMEGA**2

LAMBDA_TABLES: dict[int, list[list[complex]]] = {
    5: [[1, -1, 1], [_W, -_W, _W2], [_W2, -_W2, _W]],
    6: [[1, 1, 1], [_W, _W, _W2], [_W2, _W2, _W]],
    7: [[1, _W, _W2], [1, -_W2, _W], [-1, _W2, -_W]],
    8: [[_W, _W, _W2], [1, -_W2, _W2], [-1, 1, -_W]],
}

# Fourier transforms of the tables above, prefactors included.
LAMBDA_HAT_TABLES: dict[int, list[list[complex]]] = {
    5: [[0, 0, 0], [1, _W2, _W], [0, 1 - _W, 1 - _W2]],
    6: [[0, 0, 0], [1, _W2, _W], [2, 1 + _W, 1 + _W2]],
    7: [
        [0, 0, 1],
        [(-2 + 2 * _W) / 3, (1 + 2 * _W) / 3, (7 + 2 * _W) / 3],
        [(2 - 2 * _W) / 3, (-1 - 2 * _W) / 3, (-1 - 2 * _W) / 3],
    ],
    8: [
        [0, (-3 + 3 * _W) / 3, 1],
        [(-2 + 2 * _W) / 3, (1 + 2 * _W) / 3, (4 + 5 * _W) / 3],
        [(-1 + _W) / 3, (-1 - 2 * _W) / 3, (-1 - 2 * _W) / 3],
    ],
}

SUPPORT_TOL = 1e-9


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    s: int
    construction: Construction
    operator: BipartiteOperator
    expected_coefficients: np.ndarray
    coefficients: np.ndarray
    unitarity_residual: float
    maximally_entangled: bool


@dataclass(frozen=True)
class CertificateS24:
    support: tuple[Point, ...]
    v: Point
    x: Point


def lambda_table(s: int) -> GridFunction:
    if s not in LAMBDA_TABLES:
        raise DomainError(f"the lambda table covers S in {{5, 6, 7, 8}}, got {s}")
    return GridFunction(n=3, values=np.array(LAMBDA_TABLES[s]), unimodular=True)


def lambda_hat_table(s: int) -> np.ndarray:
    if s not in LAMBDA_HAT_TABLES:
        raise DomainError(f"the lambda-hat table covers S in {{5, 6, 7, 8}}, got {s}")
    return np.array(LAMBDA_HAT_TABLES[s], dtype=complex)


def lambda_tensor(s: int) -> GridFunction:
    factors = {1: ((1.0, 1.0, 1.0), (1.0, 1.0, 1.0)), 3: ((1.0, 1.0, 1.0), G3), 9: (G3, G3)}
    if s not in factors:
        raise DomainError(f"tensor-product lambdas cover S in {{1, 3, 9}}, got {s}")
    g_a, g_b = (np.array(g, dtype=complex) for g in factors[s])
    return GridFunction(n=3, values=np.outer(g_a, g_b), unimodular=True)


def fourier_support(grid: GridFunction, tol: float = SUPPORT_TOL) -> set[Point]:
    magnitudes = np.abs(dft2(grid).values)
    return {(a, b) for a in range(grid.n) for b in range(grid.n) if magnitudes[a, b] > tol}


def impossibility_certificates() -> list[CertificateS24]:
    points = [(a, b) for a in range(3) for b in range(3)]
    translations = [p for p in points if p != (0, 0)]
    certificates: list[CertificateS24] = []
    for size in (2, 4):
        for support in combinations(points, size):
            certificate = _find_witness(support, translations)
            if certificate is None:
                raise CertificationError(f"no unique-translate witness for support {support}")
            certificates.append(certificate)
    return certificates


def verify_certificate(certificate: CertificateS24) -> bool:
    if certificate.v == (0, 0) or len(set(certificate.support)) not in (2, 4):
        return False
    hits = _translate_hits(certificate.support, certificate.v)
    return hits == [certificate.x]


def explicit_s2_s4() -> tuple[BipartiteOperator, BipartiteOperator, BipartiteOperator]:
    shift = weyl_pair(3).shift
    identity = np.eye(3)
    p1 = np.diag([1.0, 0.0, 0.0])
    p2 = np.diag([0.0, 1.0, 1.0])
    shape = BipartiteShape.square(3)
    u = BipartiteOperator(shape=shape, matrix=np.kron(p1, shift) + np.kron(p2, identity))
    v = BipartiteOperator(shape=shape, matrix=np.kron(shift, p1) + np.kron(identity, p2))
    uv = BipartiteOperator(
        shape=shape,
        matrix=(
            np.kron(p1 @ shift, shift @ p1)
            + np.kron(p1, shift @ p2)
            + np.kron(p2 @ shift, p1)
            + np.kron(p2, p2)
        ),
    )
    return u, v, uv


def full_catalog(rel_tol: float = DEFAULT_REL_TOL) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    u, v, uv = explicit_s2_s4()
    explicit = {2: u, 4: uv}
    for s in range(1, 10):
        if s in explicit:
            operator = explicit[s]
            decomposition = schmidt_decompose(operator, rel_tol)
            expected = decomposition.coefficients
            construction: Construction = "explicit-unitary"
        else:
            grid = lambda_tensor(s) if s in (1, 3, 9) else lambda_table(s)
            operator = diag_from_lambda(grid)
            decomposition = schmidt_decompose(operator, rel_tol)
            expected = analytic_schmidt(grid, rel_tol).sorted_coefficients()
            construction = "tensor-product" if s in (1, 3, 9) else "table"
            if not np.allclose(np.sort(expected), np.sort(decomposition.coefficients), rtol=0.0, atol=1e-9):
                raise CertificationError(f"analytic and oracle coefficients disagree for S={s}")
        if decomposition.schmidt_number != s:
            raise CertificationError(f"catalog operator for S={s} has Schmidt number {decomposition.schmidt_number}")
        entries.append(
            CatalogEntry(
                s=s,
                construction=construction,
                operator=operator,
                expected_coefficients=np.array(expected),
                coefficients=decomposition.coefficients,
                unitarity_residual=unitarity_residual(operator.matrix),
                maximally_entangled=is_maximally_entangled(decomposition, rel_tol),
            )
        )
    return entries


def _find_witness(support: tuple[Point, ...], translations: list[Point]) -> CertificateS24 | None:
    for v in translations:
        hits = _translate_hits(support, v)
        if len(hits) == 1:
            return CertificateS24(support=support, v=v, x=hits[0])
    return None


def _translate_hits(support: tuple[Point, ...], v: Point) -> list[Point]:
    members = set(support)
    return [x for x in support if ((x[0] + v[0]) % 3, (x[1] + v[1]) % 3) in members]
