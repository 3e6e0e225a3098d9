from __future__ import annotations

import numpy as np
import pytest

from opschmidt.biunimodular import (
    LineFunction,
    NotApplicableError,
    PreconditionError,
    applicable_case,
    bjorck_saffari,
    bjorck_saffari_spec,
    dft1,
    gaussian,
    is_biunimodular,
    largest_square_root_divisor,
    max_entangled_unitary,
    product_grid,
)
from opschmidt.linalg import DomainError, ShapeError, is_maximally_entangled, schmidt_decompose, unitarity_residual
from opschmidt.weyl import dft2

OMEGA = np.exp(2j * np.pi / 3)


def test_dft_of_constant_is_scaled_delta():
    transformed = dft1(LineFunction(n=4, values=np.ones(4)))
    np.testing.assert_allclose(transformed.values, [2, 0, 0, 0], atol=1e-12)


def test_dft_uses_positive_exponent():
    transformed = dft1(LineFunction(n=4, values=[1, 1, 1, -1]))
    np.testing.assert_allclose(transformed.values, [1, 1j, 1, -1j], atol=1e-12)


def test_constant_is_not_biunimodular():
    assert not is_biunimodular(LineFunction(n=3, values=np.ones(3)))
    assert is_biunimodular(LineFunction(n=1, values=[1j]))


def test_odd_gaussian_values():
    f = gaussian(3, 1, 0)
    np.testing.assert_allclose(f.values, [1, OMEGA, OMEGA], atol=1e-12)
    assert is_biunimodular(f)


@pytest.mark.parametrize(("n", "a", "b"), [(5, 1, 0), (7, 3, 1), (9, 2, 4), (15, 7, 3)])
def test_odd_gaussians_are_biunimodular(n: int, a: int, b: int):
    assert is_biunimodular(gaussian(n, a, b))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 12])
def test_even_chirp_is_biunimodular(n: int):
    f = gaussian(n)
    np.testing.assert_allclose(f.values, np.exp(1j * np.pi * np.arange(n) ** 2 / n), atol=1e-12)
    assert is_biunimodular(f)


def test_gaussian_needs_unit_coefficient():
    with pytest.raises(DomainError):
        gaussian(9, 3, 0)
    with pytest.raises(DomainError):
        gaussian(0)


@pytest.mark.parametrize(("n", "root"), [(1, 1), (6, 1), (12, 2), (18, 3), (72, 6), (81, 9)])
def test_largest_square_root_divisor(n: int, root: int):
    assert largest_square_root_divisor(n) == root


def test_case_selection():
    assert applicable_case(2, 2) == 1
    assert applicable_case(3, 3) == 1
    assert applicable_case(3, 6) == 2


def test_bjorck_saffari_on_z4():
    spec = bjorck_saffari_spec(4, rho_exponent=1)
    assert (spec.n, spec.m, spec.case_tag) == (2, 2, 1)
    f = bjorck_saffari(spec)
    np.testing.assert_allclose(f.values, [1, 1, 1, -1], atol=1e-12)
    assert is_biunimodular(f)


@pytest.mark.parametrize("modulus", [8, 9, 16, 25, 27, 36])
def test_case_one_functions_are_biunimodular(modulus: int):
    spec = bjorck_saffari_spec(modulus)
    assert spec.case_tag == 1
    assert is_biunimodular(bjorck_saffari(spec))


def test_case_one_accepts_phases_and_permutation():
    spec = bjorck_saffari_spec(9, c=[1, 1j, -1], tau=[2, 0, 1], rho_exponent=2)
    assert is_biunimodular(bjorck_saffari(spec))


@pytest.mark.parametrize("modulus", [18, 50])
def test_case_two_functions_are_biunimodular(modulus: int):
    spec = bjorck_saffari_spec(modulus)
    assert spec.case_tag == 2
    assert is_biunimodular(bjorck_saffari(spec))


def test_square_free_modulus_is_not_applicable():
    with pytest.raises(NotApplicableError):
        bjorck_saffari(bjorck_saffari_spec(6))


def test_bjorck_saffari_spec_validation():
    with pytest.raises(DomainError):
        bjorck_saffari_spec(9, case_tag=2)
    with pytest.raises(DomainError):
        bjorck_saffari_spec(9, rho_exponent=3)
    with pytest.raises(DomainError):
        bjorck_saffari_spec(9, tau=[0, 0, 1])
    with pytest.raises(DomainError):
        bjorck_saffari_spec(9, c=[1, 2, 1])


def test_lift_of_qutrit_gaussian_is_maximally_entangled():
    g = gaussian(3)
    op = max_entangled_unitary(g, g)
    assert unitarity_residual(op.matrix) < 1e-12
    decomposition = schmidt_decompose(op)
    assert decomposition.schmidt_number == 9
    np.testing.assert_allclose(decomposition.coefficients, np.ones(9), atol=1e-9)
    assert is_maximally_entangled(decomposition)


def test_lift_of_bjorck_saffari_on_z4():
    f = bjorck_saffari(bjorck_saffari_spec(4))
    decomposition = schmidt_decompose(max_entangled_unitary(f, gaussian(4)))
    np.testing.assert_allclose(decomposition.coefficients, np.ones(16), atol=1e-9)


def test_product_grid_is_biunimodular_in_two_dimensions():
    grid = product_grid(gaussian(5, 2, 1), gaussian(5))
    assert is_biunimodular(grid)


def test_lift_requires_biunimodular_inputs():
    with pytest.raises(PreconditionError):
        max_entangled_unitary(LineFunction(n=3, values=np.ones(3)), gaussian(3))


def test_product_grid_needs_same_group():
    with pytest.raises(ShapeError):
        product_grid(gaussian(3), gaussian(5))


@pytest.mark.parametrize("n", [1, 4, 7])
def test_dft_is_unitary(n: int):
    rng = np.random.default_rng(n)
    f = LineFunction(n=n, values=rng.standard_normal(n) + 1j * rng.standard_normal(n))
    assert np.linalg.norm(dft1(f).values) == pytest.approx(np.linalg.norm(f.values), rel=1e-12)


def test_product_grid_transform_is_product_of_transforms():
    rng = np.random.default_rng(5)
    f = LineFunction(n=5, values=rng.standard_normal(5) + 1j * rng.standard_normal(5))
    g = gaussian(5, 2, 3)
    transformed = dft2(product_grid(f, g)).values
    np.testing.assert_allclose(transformed, np.outer(dft1(f).values, dft1(g).values), atol=1e-12)
