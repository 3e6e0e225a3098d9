from __future__ import annotations

import math

import numpy as np
import pytest

from opschmidt.linalg import (
    DomainError,
    hartley_strength,
    orthonormality_residual,
    reconstruction_residual,
    schmidt_decompose,
    unitarity_residual,
)
from opschmidt.qft import (
    QftSpec,
    allowed_coefficient_values,
    class_left_factor,
    comm_cost_bounds,
    communication_operator,
    equiv_classes,
    max_entangled_predicate,
    operator_comm_cost_bounds,
    qft_analytic_schmidt,
    qft_coefficient_values,
    qft_is_max_entangled,
    qft_matrix,
    qft_schmidt_number,
    qft_sweep,
    sweep_specs,
)


def test_qft_matrix_is_unitary():
    op = qft_matrix(QftSpec(2, 3, 3, 2))
    assert unitarity_residual(op.matrix) < 1e-12
    assert op.matrix[1, 1] == pytest.approx(np.exp(2j * np.pi / 6) / math.sqrt(6))


def test_two_qubit_qft_is_maximally_entangled():
    spec = QftSpec(2, 2, 2, 2)
    decomposition = qft_analytic_schmidt(spec)
    np.testing.assert_allclose(decomposition.coefficients, np.ones(4))
    assert hartley_strength(decomposition) == pytest.approx(2.0)
    assert qft_schmidt_number(spec) == 4
    assert qft_is_max_entangled(spec, check_oracle=True)


def test_classes_partition_the_grid():
    spec = QftSpec(2, 6, 3, 4)
    classes = equiv_classes(spec)
    members = [member for cls in classes for member in cls.members]
    assert len(classes) == 6
    assert len(members) == len(set(members)) == spec.n2 * spec.m2
    assert {cls.cardinality for cls in classes} == {4}


def test_uneven_split_has_three_coefficient_values():
    spec = QftSpec(2, 3, 2, 3)
    assert sorted(cls.cardinality for cls in equiv_classes(spec)) == [1, 2, 2, 4]
    values = qft_coefficient_values(spec)
    assert [multiplicity for _, multiplicity in values] == [1, 2, 1]
    np.testing.assert_allclose([value for value, _ in values], np.sqrt([16 / 6, 8 / 6, 4 / 6]))
    np.testing.assert_allclose(allowed_coefficient_values(spec), np.sqrt([16 / 6, 8 / 6, 4 / 6]))
    assert not max_entangled_predicate(spec)
    assert not qft_is_max_entangled(spec, check_oracle=True)


@pytest.mark.parametrize(
    "dims",
    [(2, 2, 2, 2), (2, 3, 2, 3), (2, 6, 3, 4), (4, 2, 2, 4), (3, 4, 2, 6), (1, 6, 6, 1), (2, 4, 8, 1), (8, 1, 2, 4)],
)
def test_analytic_decomposition_matches_oracle(dims: tuple[int, int, int, int]):
    spec = QftSpec(*dims)
    op = qft_matrix(spec)
    analytic = qft_analytic_schmidt(spec)
    oracle = schmidt_decompose(op)

    assert analytic.schmidt_number == oracle.schmidt_number == min(dims[0] * dims[2], dims[1] * dims[3])
    np.testing.assert_allclose(np.sort(analytic.coefficients), np.sort(oracle.coefficients), atol=1e-9)
    assert reconstruction_residual(op, analytic) <= 1e-9
    assert orthonormality_residual(analytic) <= 1e-9
    assert np.sum(analytic.coefficients**2) == pytest.approx(spec.total)


def test_comm_cost_bounds_for_two_qubits():
    bounds = comm_cost_bounds(QftSpec(2, 2, 2, 2), check_oracle=True)
    assert bounds.lower == pytest.approx(2.0)
    assert bounds.upper == pytest.approx(2.0)
    assert bounds.maximal


def test_communication_operator_decomposition():
    op, decomposition = communication_operator(2, 3, 2)
    np.testing.assert_allclose(decomposition.coefficients, np.full(3, 2.0))
    assert reconstruction_residual(op, decomposition) <= 1e-12
    assert orthonormality_residual(decomposition) <= 1e-12
    assert schmidt_decompose(op).schmidt_number == 3
    bounds = operator_comm_cost_bounds(op)
    assert bounds.lower == pytest.approx(math.log2(3))
    assert bounds.upper == pytest.approx(math.log2(12))
    assert not bounds.maximal


def test_communication_operator_rejects_zero_dimension():
    with pytest.raises(DomainError):
        communication_operator(2, 0, 2)


def test_spec_validation():
    with pytest.raises(DomainError):
        QftSpec(2, 2, 3, 1)
    with pytest.raises(DomainError):
        QftSpec(0, 2, 1, 0)


def test_sweep_covers_every_factorization():
    specs = sweep_specs(4)
    # divisor counts of 1..4 are 1, 2, 2, 3
    assert len(specs) == 1 + 4 + 4 + 9
    assert QftSpec(2, 2, 4, 1) in specs


def test_sweep_agrees_with_oracle():
    rows = qft_sweep(8)
    assert rows
    for row in rows:
        assert row.agrees_with_oracle(), row.spec.as_list()
        assert row.schmidt_number == row.class_count
        assert row.max_entangled == max_entangled_predicate(row.spec)


@pytest.mark.parametrize("dims", [(2, 6, 3, 4), (2, 3, 2, 3), (8, 1, 2, 4), (3, 4, 2, 6)])
def test_left_factor_does_not_depend_on_class_representative(dims: tuple[int, int, int, int]):
    spec = QftSpec(*dims)
    for cls in equiv_classes(spec):
        base = class_left_factor(spec, cls.base)
        for member in cls.members:
            np.testing.assert_allclose(class_left_factor(spec, member), base, atol=1e-12)
