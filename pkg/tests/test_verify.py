from __future__ import annotations

import math

import pytest

from opschmidt.linalg import identity_operator, schmidt_decompose
from opschmidt.models import AcceptanceReport, CheckResult
from opschmidt.verify import (
    _timed,
    check_biunimodular,
    check_catalog,
    check_certificates,
    check_communication,
    check_det_gradient,
    check_lambda_hat_tables,
    check_qft_sweep,
    check_swap,
    check_weyl_oracle,
)


def test_catalog_check_passes():
    passed, residual, detail = check_catalog(1e-9)
    assert passed
    assert residual < 1e-10
    assert "[2, 2, 4]" in detail


def test_lambda_hat_tables_match():
    passed, residual, _ = check_lambda_hat_tables()
    assert passed
    assert residual <= 1e-12


def test_certificates_check_passes():
    passed, failures, detail = check_certificates()
    assert passed
    assert failures == 0.0
    assert detail.startswith("162 supports")


def test_swap_check_passes():
    passed, residual, _ = check_swap(1e-9)
    assert passed
    assert residual <= 1e-9


def test_weyl_oracle_check_passes():
    passed, residual, detail = check_weyl_oracle(1e-9, seed=0)
    assert passed, detail
    assert residual <= 1e-9
    assert "0 rank mismatches" in detail


def test_qft_sweep_check_passes():
    passed, residual, detail = check_qft_sweep(1e-9)
    assert passed, detail
    assert residual <= 1e-9
    assert "failing" not in detail


def test_communication_check_passes():
    passed, residual, detail = check_communication(1e-9)
    assert passed, detail
    assert residual <= 1e-9
    assert "non-maximal bounds []; rank mismatches []" in detail


def test_communication_check_fails_when_oracle_rank_disagrees(monkeypatch: pytest.MonkeyPatch):
    rank_one = schmidt_decompose(identity_operator(1, 1))
    monkeypatch.setattr("opschmidt.qft.schmidt_decompose", lambda operator, rel_tol=1e-9: rank_one)

    result = _timed("communication-bounds", lambda: check_communication(1e-9))
    assert not result.passed
    assert result.detail.startswith("ClassConventionError")


def test_biunimodular_check_passes():
    passed, residual, detail = check_biunimodular(1e-9)
    assert passed, detail
    assert residual <= 1e-9
    assert "failing" not in detail


def test_det_gradient_check_with_few_trials():
    passed, _, detail = check_det_gradient(1e-9, seed=0, trials=5, sphere_samples=100)
    assert passed, detail


def test_timed_turns_exceptions_into_failed_checks():
    def boom() -> tuple[bool, float, str]:
        raise ValueError("bad input")

    result = _timed("boom", boom)
    assert result.passed is False
    assert math.isinf(result.max_residual)
    assert result.detail == "ValueError: bad input"
    assert result.elapsed_seconds >= 0.0


def test_acceptance_report_passes_only_when_every_check_does():
    ok = CheckResult(name="a", passed=True, max_residual=0.0, elapsed_seconds=0.1)
    bad = CheckResult(name="b", passed=False, max_residual=float("nan"), elapsed_seconds=0.1)
    assert AcceptanceReport(rel_tol=1e-9, seed=0, checks=[ok]).passed
    report = AcceptanceReport(rel_tol=1e-9, seed=0, checks=[ok, bad])
    assert not report.passed
    assert report.checks[1].max_residual == math.inf


def test_check_result_rejects_negative_elapsed():
    with pytest.raises(ValueError):
        CheckResult(name="a", passed=True, max_residual=0.0, elapsed_seconds=-1.0)
