from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .biunimodular import (
    BIUNIMODULAR_TOL,
    LineFunction,
    bjorck_saffari,
    bjorck_saffari_spec,
    dft1,
    gaussian,
    is_biunimodular,
    max_entangled_unitary,
)
from .catalog3 import (
    explicit_s2_s4,
    full_catalog,
    impossibility_certificates,
    lambda_hat_table,
    lambda_table,
    verify_certificate,
)
from .linalg import (
    DEFAULT_REL_TOL,
    orthonormality_residual,
    reconstruction_residual,
    schmidt_decompose,
    schmidt_number,
    swap_operator,
)
from .magic import DEFAULT_SPHERE_SAMPLES, check_properties
from .models import AcceptanceReport, CheckResult
from .qft import (
    comm_cost_bounds,
    communication_operator,
    qft_schmidt_number,
    qft_sweep,
    sweep_specs,
)
from .weyl import compare_with_oracle, dft2, random_unimodular, swap_decomposition


TABLE_TOL = 1e-12
COEFFICIENT_TOL = 1e-9
QFT_ORACLE_MAX_N = 16
QFT_COUNT_MAX_N = 24
COMMUNICATION_MAX_VOLUME = 24
RANDOM_LAMBDAS_PER_N = 20
ODD_GAUSSIAN_MAX_N = 15
EVEN_GAUSSIAN_MAX_N = 16
BJORCK_SAFFARI_CASE_ONE = (4, 8, 9, 12, 16)
BJORCK_SAFFARI_CASE_TWO = (18,)
LIFT_MAX_N = 6
SWAP_MAX_N = 6
PROPERTY_DIMENSIONS = (2, 3, 4)

Outcome = tuple[bool, float, str]


def run_acceptance_suite(
    rel_tol: float = DEFAULT_REL_TOL,
    seed: int = 0,
    trials: int = 100,
    sphere_samples: int = DEFAULT_SPHERE_SAMPLES,
) -> AcceptanceReport:
    checks = [
        _timed("catalog", lambda: check_catalog(rel_tol)),
        _timed("lambda-hat-tables", check_lambda_hat_tables),
        _timed("impossibility-certificates", check_certificates),
        _timed("weyl-analytic-vs-oracle", lambda: check_weyl_oracle(rel_tol, seed)),
        _timed("qft-sweep", lambda: check_qft_sweep(rel_tol)),
        _timed("communication-bounds", lambda: check_communication(rel_tol)),
        _timed("biunimodular", lambda: check_biunimodular(rel_tol)),
        _timed("swap", lambda: check_swap(rel_tol)),
        _timed("det-gradient-properties", lambda: check_det_gradient(rel_tol, seed, trials, sphere_samples)),
    ]
    return AcceptanceReport(rel_tol=rel_tol, seed=seed, checks=checks)


def check_catalog(rel_tol: float) -> Outcome:
    entries = full_catalog(rel_tol)
    numbers = [entry.s for entry in entries]
    u, v, uv = explicit_s2_s4()
    explicit = [schmidt_number(op, rel_tol) for op in (u, v, uv)]
    residual = max(entry.unitarity_residual for entry in entries)
    passed = numbers == list(range(1, 10)) and explicit == [2, 2, 4] and residual <= COEFFICIENT_TOL
    return passed, residual, f"Schmidt numbers {numbers}; Sch(U), Sch(V), Sch(UV) = {explicit}"


def check_lambda_hat_tables() -> Outcome:
    residual = 0.0
    for s in (5, 6, 7, 8):
        computed = dft2(lambda_table(s)).values
        residual = max(residual, float(np.max(np.abs(computed - lambda_hat_table(s)))))
    return residual <= TABLE_TOL, residual, "S = 5, 6, 7, 8"


def check_certificates() -> Outcome:
    certificates = impossibility_certificates()
    failures = sum(1 for certificate in certificates if not verify_certificate(certificate))
    passed = len(certificates) == 162 and failures == 0
    return passed, float(failures), f"{len(certificates)} supports certified, {failures} failures"


def check_weyl_oracle(rel_tol: float, seed: int) -> Outcome:
    rng = np.random.default_rng(seed)
    residual = 0.0
    mismatched = 0
    for n in range(2, 9):
        for _ in range(RANDOM_LAMBDAS_PER_N):
            comparison = compare_with_oracle(random_unimodular(n, rng), rel_tol)
            if not comparison.ranks_agree:
                mismatched += 1
                continue
            residual = max(residual, comparison.max_coefficient_error)
    passed = mismatched == 0 and residual <= COEFFICIENT_TOL
    return passed, residual, f"N = 2..8, {RANDOM_LAMBDAS_PER_N} lambdas each, {mismatched} rank mismatches"


def check_qft_sweep(rel_tol: float) -> Outcome:
    rows = qft_sweep(QFT_ORACLE_MAX_N, rel_tol, with_oracle=True)
    residual = 0.0
    failures = []
    for row in rows:
        error = row.oracle_coefficient_error if row.oracle_coefficient_error is not None else math.inf
        residual = max(residual, error)
        if not row.agrees_with_oracle(COEFFICIENT_TOL):
            failures.append(row.spec.as_list())
    counted = sweep_specs(QFT_COUNT_MAX_N)
    for spec in counted:
        qft_schmidt_number(spec, rel_tol, check_oracle=False)
    detail = f"{len(rows)} specs with oracle (N <= {QFT_ORACLE_MAX_N}), {len(counted)} class counts (N <= {QFT_COUNT_MAX_N})"
    if failures:
        detail += f"; failing dims {failures}"
    return not failures, residual, detail


def check_communication(rel_tol: float) -> Outcome:
    residual = 0.0
    not_maximal = [
        spec.as_list()
        for spec in sweep_specs(QFT_ORACLE_MAX_N)
        if not comm_cost_bounds(spec, rel_tol, check_oracle=True).maximal
    ]
    mismatched = []
    triples = [
        (d1, d2, d3)
        for d1 in range(1, COMMUNICATION_MAX_VOLUME + 1)
        for d2 in range(1, COMMUNICATION_MAX_VOLUME // d1 + 1)
        for d3 in range(1, COMMUNICATION_MAX_VOLUME // (d1 * d2) + 1)
    ]
    for d1, d2, d3 in triples:
        operator, decomposition = communication_operator(d1, d2, d3)
        oracle = schmidt_decompose(operator, rel_tol)
        if oracle.schmidt_number != decomposition.schmidt_number:
            mismatched.append((d1, d2, d3))
            continue
        residual = max(
            residual,
            float(np.max(np.abs(oracle.sorted_coefficients() - decomposition.sorted_coefficients()))),
            reconstruction_residual(operator, decomposition),
            orthonormality_residual(decomposition),
        )
    passed = not not_maximal and not mismatched and residual <= COEFFICIENT_TOL
    detail = f"{len(triples)} communication operators; non-maximal bounds {not_maximal}; rank mismatches {mismatched}"
    return passed, residual, detail


def check_biunimodular(rel_tol: float) -> Outcome:
    functions: list[tuple[str, LineFunction]] = []
    for n in range(1, ODD_GAUSSIAN_MAX_N + 1, 2):
        for a in range(n):
            if math.gcd(a, n) != 1:
                continue
            for b in range(n):
                functions.append((f"gaussian N={n} a={a} b={b}", gaussian(n, a, b)))
    for n in range(2, EVEN_GAUSSIAN_MAX_N + 1, 2):
        functions.append((f"gaussian N={n}", gaussian(n)))
    for modulus in BJORCK_SAFFARI_CASE_ONE + BJORCK_SAFFARI_CASE_TWO:
        functions.append((f"bjorck-saffari N={modulus}", bjorck_saffari(bjorck_saffari_spec(modulus))))

    residual = 0.0
    failing = []
    for label, function in functions:
        residual = max(residual, _unimodular_deviation(function))
        if not is_biunimodular(function, BIUNIMODULAR_TOL):
            failing.append(label)

    for n in range(1, LIFT_MAX_N + 1):
        f = gaussian(n)
        unitary = max_entangled_unitary(f, f)
        coefficients = schmidt_decompose(unitary, rel_tol).coefficients
        error = float(np.max(np.abs(coefficients - 1.0)))
        residual = max(residual, error)
        if coefficients.size != n * n or error > COEFFICIENT_TOL:
            failing.append(f"lift N={n}")
    detail = f"{len(functions)} functions, {LIFT_MAX_N} lifts"
    if failing:
        detail += f"; failing {failing}"
    return not failing, residual, detail


def check_swap(rel_tol: float) -> Outcome:
    residual = 0.0
    failing = []
    for n in range(1, SWAP_MAX_N + 1):
        operator = swap_operator(n)
        coefficients = schmidt_decompose(operator, rel_tol).coefficients
        error = max(
            float(np.max(np.abs(coefficients - 1.0))),
            reconstruction_residual(operator, swap_decomposition(n)),
        )
        residual = max(residual, error)
        if coefficients.size != n * n or error > COEFFICIENT_TOL:
            failing.append(n)
    return not failing, residual, f"N = 1..{SWAP_MAX_N}; failing {failing}"


def check_det_gradient(rel_tol: float, seed: int, trials: int, sphere_samples: int) -> Outcome:
    residual = 0.0
    failing = []
    for n in PROPERTY_DIMENSIONS:
        report = check_properties(n, trials=trials, seed=seed, sphere_samples=sphere_samples, rel_tol=rel_tol)
        for check in report.checks:
            residual = max(residual, check.max_residual)
            if not check.passed:
                failing.append(f"N={n} {check.name}")
    return not failing, residual, f"N in {list(PROPERTY_DIMENSIONS)}, {trials} trials; failing {failing}"


def _unimodular_deviation(function: LineFunction) -> float:
    values = np.concatenate([function.values, dft1(function).values])
    return float(np.max(np.abs(np.abs(values) - 1.0)))


def _timed(name: str, check: Callable[[], Outcome]) -> CheckResult:
    started = time.perf_counter()
    try:
        passed, residual, detail = check()
    except (ValueError, RuntimeError) as exc:
        passed, residual, detail = False, math.inf, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - started
    return CheckResult(
        name=name,
        passed=bool(passed),
        max_residual=float(residual),
        detail=detail,
        elapsed_seconds=elapsed,
    )
