from __future__ import annotations

import math

import numpy as np
import pytest

from opschmidt.linalg import (
    BipartiteOperator,
    BipartiteShape,
    DomainError,
    SchmidtDecomposition,
    ShapeError,
    UndefinedDecompositionError,
    hartley_strength,
    identity_operator,
    is_maximally_entangled,
    orthonormality_residual,
    random_complex_matrix,
    random_unitary,
    realign,
    realigned_singular_values,
    reconstruction_residual,
    schmidt_decompose,
    schmidt_number,
    schmidt_strength,
    swap_operator,
    unitarity_residual,
    vector_as_operator,
)


def test_realign_of_scalar_is_itself():
    op = BipartiteOperator(shape=BipartiteShape(1, 1, 1, 1), matrix=[[2 - 1j]])
    np.testing.assert_allclose(realign(op), [[2 - 1j]])


def test_realign_moves_entries_to_factor_blocks():
    shape = BipartiteShape(d_a=2, d_b=3, d_ap=2, d_bp=3)
    matrix = np.arange(36, dtype=complex).reshape(6, 6)
    m = realign(BipartiteOperator(shape=shape, matrix=matrix))
    assert m.shape == (4, 9)
    # M[(a'*dA + a), (b'*dB + b)] = F[(a'*dBp + b'), (a*dB + b)]
    for ap in range(2):
        for a in range(2):
            for bp in range(3):
                for b in range(3):
                    assert m[ap * 2 + a, bp * 3 + b] == matrix[ap * 3 + bp, a * 3 + b]


def test_product_operator_has_rank_one_realignment():
    rng = np.random.default_rng(1)
    x = random_complex_matrix(2, 2, rng)
    y = random_complex_matrix(2, 2, rng)
    values = realigned_singular_values(BipartiteOperator.from_factors(x, y))
    assert values[0] == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y))
    assert np.all(values[1:] < 1e-12 * values[0])


def test_identity_on_qubits_has_single_coefficient_two():
    decomposition = schmidt_decompose(identity_operator(2, 2))
    np.testing.assert_allclose(decomposition.coefficients, [2.0])
    np.testing.assert_allclose(np.abs(decomposition.left_factors[0]), np.eye(2) / math.sqrt(2), atol=1e-12)
    np.testing.assert_allclose(np.abs(decomposition.right_factors[0]), np.eye(2) / math.sqrt(2), atol=1e-12)
    assert not is_maximally_entangled(decomposition)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_swap_is_maximally_entangled(n: int):
    decomposition = schmidt_decompose(swap_operator(n))
    assert decomposition.schmidt_number == n * n
    np.testing.assert_allclose(decomposition.coefficients, np.ones(n * n), atol=1e-9)
    assert is_maximally_entangled(decomposition)
    assert schmidt_strength(decomposition) == pytest.approx(2 * math.log2(n))


def test_swap_on_qubits_hartley_strength():
    assert hartley_strength(schmidt_decompose(swap_operator(2))) == pytest.approx(2.0)


def test_product_operator_strengths_vanish():
    rng = np.random.default_rng(2)
    op = BipartiteOperator.from_factors(random_complex_matrix(3, 2, rng), random_complex_matrix(2, 4, rng))
    decomposition = schmidt_decompose(op)
    assert schmidt_number(op) == 1
    assert hartley_strength(decomposition) == 0.0
    assert schmidt_strength(decomposition) == pytest.approx(0.0, abs=1e-12)


def test_decomposition_invariants_on_rectangular_operator():
    rng = np.random.default_rng(3)
    shape = BipartiteShape(d_a=2, d_b=3, d_ap=4, d_bp=2)
    op = BipartiteOperator(shape=shape, matrix=random_complex_matrix(shape.rows, shape.cols, rng))
    decomposition = schmidt_decompose(op)

    assert decomposition.schmidt_number == min(2 * 4, 3 * 2)
    assert list(decomposition.coefficients) == sorted(decomposition.coefficients, reverse=True)
    assert reconstruction_residual(op, decomposition) <= 1e-9
    assert orthonormality_residual(decomposition) <= 1e-9
    assert np.sum(decomposition.coefficients**2) == pytest.approx(op.hs_norm() ** 2, rel=1e-9)


def test_local_unitaries_leave_coefficients_unchanged():
    rng = np.random.default_rng(4)
    op = BipartiteOperator(shape=BipartiteShape.square(3, 2), matrix=random_complex_matrix(6, 6, rng))
    before = schmidt_decompose(op).sorted_coefficients()

    outer = np.kron(random_unitary(3, rng), random_unitary(2, rng))
    inner = np.kron(random_unitary(3, rng), random_unitary(2, rng))
    rotated = BipartiteOperator(shape=op.shape, matrix=outer @ op.matrix @ inner)
    after = schmidt_decompose(rotated).sorted_coefficients()

    np.testing.assert_allclose(after, before, atol=1e-9)


def test_unitary_on_square_space_has_coefficient_norm_n_squared():
    rng = np.random.default_rng(5)
    op = BipartiteOperator(shape=BipartiteShape.square(2, 3), matrix=random_unitary(6, rng))
    decomposition = schmidt_decompose(op)
    assert np.sum(decomposition.coefficients**2) == pytest.approx(6.0)
    assert unitarity_residual(op.matrix) < 1e-12


def test_vector_schmidt_coefficients_come_from_same_oracle():
    psi = np.array([1.0, 0.0, 0.0, 2.0])
    decomposition = schmidt_decompose(vector_as_operator(psi, 2, 2))
    np.testing.assert_allclose(decomposition.coefficients, [2.0, 1.0])


def test_zero_operator_is_undefined():
    with pytest.raises(UndefinedDecompositionError):
        schmidt_decompose(BipartiteOperator(shape=BipartiteShape.square(2), matrix=np.zeros((4, 4))))


def test_shape_mismatch_raises():
    with pytest.raises(ShapeError):
        BipartiteOperator(shape=BipartiteShape.square(2), matrix=np.eye(3))


def test_non_finite_entries_raise():
    with pytest.raises(ShapeError):
        BipartiteOperator(shape=BipartiteShape(1, 1, 1, 1), matrix=[[np.nan]])


def test_dimensions_must_be_positive():
    with pytest.raises(ShapeError):
        BipartiteShape(d_a=0, d_b=1, d_ap=1, d_bp=1)


def test_relative_tolerance_must_be_positive():
    with pytest.raises(DomainError):
        schmidt_decompose(identity_operator(2, 2), rel_tol=0.0)


def test_decomposition_rejects_non_positive_coefficients():
    with pytest.raises(DomainError):
        SchmidtDecomposition(
            coefficients=[0.0],
            left_factors=np.ones((1, 1, 1)),
            right_factors=np.ones((1, 1, 1)),
            shape=BipartiteShape(1, 1, 1, 1),
        )
