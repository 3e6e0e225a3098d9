from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Any, Callable, NoReturn, Optional, TypeVar

import numpy as np
import typer

from .biunimodular import (
    LineFunction,
    bjorck_saffari,
    bjorck_saffari_spec,
    gaussian,
    is_biunimodular,
    max_entangled_unitary,
)
from .catalog3 import CertificationError, full_catalog, impossibility_certificates
from .config import ConfigError, ResolvedCliSettings, resolve_cli_settings
from .formatting import dump_json, format_coefficients, format_flag, format_real, render_table
from .linalg import (
    hartley_strength,
    is_maximally_entangled,
    orthonormality_residual,
    reconstruction_residual,
    schmidt_decompose,
    schmidt_strength,
)
from .magic import check_properties
from .matrix_io import (
    MatrixFileError,
    decomposition_to_payload,
    grid_to_payload,
    line_to_payload,
    load_bipartite_operator,
    load_grid_function,
    load_line_function,
    operator_to_payload,
    write_payload,
)
from .models import (
    AcceptanceReport,
    BiunimodularReport,
    CatalogReport,
    CatalogRow,
    CertificatePayload,
    CoefficientValue,
    CommCostPayload,
    PropertyCheckPayload,
    PropertyReportPayload,
    QftClassRow,
    QftReport,
    QftSweepRow,
    SchmidtReport,
    WeylReport,
)
from .qft import (
    ClassConventionError,
    CommCostBounds,
    QftSpec,
    class_coefficient,
    comm_cost_bounds,
    equiv_classes,
    qft_analytic_schmidt,
    qft_coefficient_values,
    qft_is_max_entangled,
    qft_schmidt_number,
    qft_sweep,
)
from .verify import COEFFICIENT_TOL, run_acceptance_suite
from .weyl import compare_with_oracle, dft2, random_unimodular


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class Family(str, Enum):
    GAUSSIAN = "gaussian"
    BJORCK_SAFFARI = "bjorck-saffari"


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION_FAILED = 2

CONFIG_HELP = "Path to INI config file (default: auto-discover opschmidt.ini + opschmidt.local.ini)"
FORMAT_HELP = "Output format: json or text"
TOL_HELP = "Relative rank cutoff against the largest singular value (default: 1e-9)"
SEED_HELP = "Seed for randomized inputs"
DEBUG_HELP = "Emit diagnostics to stderr"

T = TypeVar("T")

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Operator-Schmidt decompositions, Fourier constructions and their oracle checks.",
)


@app.command("schmidt")
def schmidt_command(
    input_path: Path = typer.Option(..., "--in", help="BipartiteOperator JSON file"),
    factors: bool = typer.Option(False, "--factors/--no-factors", help="Include the factor matrices"),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(config, output_format, tol=tol, debug=debug)
    report = _guarded(lambda: run_schmidt(input_path, settings.rel_tol, include_factors=factors, debug=settings.debug))
    _emit(report, settings, format_schmidt_summary)


@app.command("weyl")
def weyl_command(
    input_path: Optional[Path] = typer.Option(None, "--in", help="GridFunction JSON file with lambda(alpha, beta)"),
    random_n: Optional[int] = typer.Option(None, "--random", min=1, help="Use a random unimodular lambda on Z_N^2"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the diagonal unitary D as a BipartiteOperator file"),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    seed: Optional[int] = typer.Option(None, "--seed", help=SEED_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(config, output_format, tol=tol, seed=seed, debug=debug)
    report = _guarded(
        lambda: run_weyl(
            input_path=input_path,
            random_n=random_n,
            out=out,
            rel_tol=settings.rel_tol,
            unimodular_tol=settings.unimodular_tol,
            seed=settings.seed,
            debug=settings.debug,
        )
    )
    _emit(report, settings, format_weyl_summary)
    if not report.agrees_with_oracle:
        raise typer.Exit(code=EXIT_VERIFICATION_FAILED)


@app.command("catalog3")
def catalog3_command(
    certificates: bool = typer.Option(
        False,
        "--certificates/--no-certificates",
        help="Include the unique-translate witnesses for every support of size 2 or 4",
    ),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(config, output_format, tol=tol, debug=debug)
    report = _guarded(lambda: run_catalog(settings.rel_tol, include_certificates=certificates, debug=settings.debug))
    _emit(report, settings, format_catalog_table)


@app.command("biuni")
def biuni_command(
    family: Family = typer.Option(Family.GAUSSIAN, "--family", case_sensitive=False, help="Function family"),
    n: Optional[int] = typer.Option(None, "--n", min=1, help="Group order N of Z_N"),
    a: int = typer.Option(1, "--a", help="Gaussian quadratic coefficient (odd N)"),
    b: int = typer.Option(0, "--b", help="Gaussian linear coefficient (odd N)"),
    tau: Optional[list[int]] = typer.Option(None, "--tau", help="Permutation of 0..n-1 (repeat the flag)"),
    c: Optional[list[str]] = typer.Option(None, "--c", help="Unimodular scalar c_h as RE,IM (repeat the flag, n times)"),
    rho_exponent: int = typer.Option(1, "--rho-exponent", help="Exponent l of the primitive root exp(2 pi i l / m)"),
    input_path: Optional[Path] = typer.Option(None, "--in", help="LineFunction JSON file to verify"),
    lift: bool = typer.Option(False, "--lift/--no-lift", help="Lift f (x) f to a unitary on C^N (x) C^N and decompose"),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(config, output_format, tol=tol, debug=debug)
    report = _guarded(
        lambda: run_biuni(
            family=family,
            n=n,
            a=a,
            b=b,
            tau=tau,
            c=c,
            rho_exponent=rho_exponent,
            input_path=input_path,
            lift=lift,
            rel_tol=settings.rel_tol,
            unimodular_tol=settings.unimodular_tol,
            debug=settings.debug,
        )
    )
    _emit(report, settings, format_biuni_summary)
    if not report.biunimodular:
        raise typer.Exit(code=EXIT_VERIFICATION_FAILED)


@app.command("qft")
def qft_command(
    dims: Optional[tuple[int, int, int, int]] = typer.Option(None, "--dims", help="M1 M2 N1 N2"),
    classes: bool = typer.Option(False, "--classes", help="List the equivalence classes"),
    decompose: bool = typer.Option(False, "--decompose", help="List the Schmidt coefficients"),
    bounds: bool = typer.Option(False, "--bounds", help="Report the communication-cost bounds"),
    sweep: Optional[int] = typer.Option(None, "--sweep", min=1, help="Run every factorization with N <= value"),
    oracle: bool = typer.Option(True, "--oracle/--no-oracle", help="Check the sweep against the SVD oracle"),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(config, output_format, tol=tol, debug=debug)
    if sweep is not None:
        rows = _guarded(lambda: run_qft_sweep(sweep, settings.rel_tol, with_oracle=oracle, debug=settings.debug))
        _emit(rows, settings, format_sweep_table)
        if not all(row.agrees_with_oracle for row in rows):
            raise typer.Exit(code=EXIT_VERIFICATION_FAILED)
        return
    if dims is None:
        _emit_error("Provide --dims M1 M2 N1 N2 or --sweep N.", EXIT_USAGE)
    report = _guarded(
        lambda: run_qft(
            dims,
            settings.rel_tol,
            include_classes=classes,
            include_coefficients=decompose,
            include_bounds=bounds,
            debug=settings.debug,
        )
    )
    _emit(report, settings, format_qft_summary)


@app.command("magic")
def magic_command(
    dim: int = typer.Option(2, "--dim", min=1, help="Dimension N of H"),
    trials: Optional[int] = typer.Option(None, "--trials", min=1, help="Random samples per property"),
    sphere_samples: Optional[int] = typer.Option(
        None,
        "--sphere-samples",
        min=1,
        help="Random unit vectors for the sphere-maximum check (N >= 3)",
    ),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    seed: Optional[int] = typer.Option(None, "--seed", help=SEED_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(
        config,
        output_format,
        tol=tol,
        seed=seed,
        trials=trials,
        sphere_samples=sphere_samples,
        debug=debug,
    )
    report = _guarded(
        lambda: run_magic(
            dim,
            trials=settings.trials,
            seed=settings.seed,
            sphere_samples=settings.sphere_samples,
            rel_tol=settings.rel_tol,
            debug=settings.debug,
        )
    )
    _emit(report, settings, format_property_table)
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFICATION_FAILED)


@app.command("verify-all")
def verify_all_command(
    trials: Optional[int] = typer.Option(None, "--trials", min=1, help="Random samples per determinant property"),
    sphere_samples: Optional[int] = typer.Option(None, "--sphere-samples", min=1, help="Sphere-maximum samples"),
    config: Optional[Path] = typer.Option(None, "--config", help=CONFIG_HELP),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", case_sensitive=False, help=FORMAT_HELP),
    tol: Optional[float] = typer.Option(None, "--tol", help=TOL_HELP),
    seed: Optional[int] = typer.Option(None, "--seed", help=SEED_HELP),
    debug: Optional[bool] = typer.Option(None, "--debug/--no-debug", help=DEBUG_HELP),
) -> None:
    settings = _settings(
        config,
        output_format,
        tol=tol,
        seed=seed,
        trials=trials,
        sphere_samples=sphere_samples,
        debug=debug,
    )
    report = _guarded(
        lambda: run_acceptance_suite(
            rel_tol=settings.rel_tol,
            seed=settings.seed,
            trials=settings.trials,
            sphere_samples=settings.sphere_samples,
        )
    )
    for check in report.checks:
        _debug(settings.debug, f"{check.name}: {check.elapsed_seconds:.3f}s")
    # Timings stay out of stdout so identical runs print identical bytes.
    if settings.output_format == OutputFormat.TEXT.value:
        for line in format_acceptance_table(report):
            typer.echo(line)
    else:
        typer.echo(dump_json(report, exclude={"checks": {"__all__": {"elapsed_seconds"}}}))
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFICATION_FAILED)


def run_schmidt(input_path: Path, rel_tol: float, include_factors: bool = False, debug: bool = False) -> SchmidtReport:
    operator = load_bipartite_operator(input_path)
    _debug(debug, f"Loaded operator with dims {operator.shape.as_list()} from {input_path}")
    decomposition = schmidt_decompose(operator, rel_tol)
    return SchmidtReport(
        dims=operator.shape.as_list(),
        schmidt_number=decomposition.schmidt_number,
        coefficients=[float(c) for c in decomposition.coefficients],
        hartley_strength=hartley_strength(decomposition),
        schmidt_strength=schmidt_strength(decomposition),
        maximally_entangled=is_maximally_entangled(decomposition, rel_tol),
        reconstruction_residual=reconstruction_residual(operator, decomposition),
        orthonormality_residual=orthonormality_residual(decomposition),
        decomposition=decomposition_to_payload(decomposition) if include_factors else None,
    )


def run_weyl(
    *,
    input_path: Path | None,
    random_n: int | None,
    out: Path | None,
    rel_tol: float,
    unimodular_tol: float,
    seed: int,
    debug: bool = False,
) -> WeylReport:
    if (input_path is None) == (random_n is None):
        raise ValueError("Provide exactly one of --in <grid.json> or --random N.")
    if input_path is not None:
        grid = load_grid_function(input_path)
        _debug(debug, f"Loaded lambda on Z_{grid.n}^2 from {input_path}")
    else:
        grid = random_unimodular(random_n, np.random.default_rng(seed))
        _debug(debug, f"Drew a random unimodular lambda on Z_{grid.n}^2 with seed={seed}")

    comparison = compare_with_oracle(grid, rel_tol)
    if out is not None:
        write_payload(operator_to_payload(comparison.operator), out)
        _debug(debug, f"Wrote D to {out}")
    return WeylReport(
        n=grid.n,
        lambda_hat=grid_to_payload(dft2(grid)),
        analytic_coefficients=[float(c) for c in comparison.analytic.sorted_coefficients()],
        oracle_coefficients=[float(c) for c in comparison.oracle.sorted_coefficients()],
        max_coefficient_error=comparison.max_coefficient_error,
        agrees_with_oracle=comparison.agrees(COEFFICIENT_TOL),
        unitary=grid.is_unimodular(unimodular_tol),
        maximally_entangled=is_maximally_entangled(comparison.oracle, rel_tol),
    )


def run_catalog(rel_tol: float, include_certificates: bool = False, debug: bool = False) -> CatalogReport:
    entries = full_catalog(rel_tol)
    _debug(debug, f"Built {len(entries)} catalog unitaries on C^3 (x) C^3")
    rows = [
        CatalogRow(
            s=entry.s,
            construction=entry.construction,
            coefficients=[float(c) for c in entry.coefficients],
            unitarity_residual=entry.unitarity_residual,
            maximally_entangled=entry.maximally_entangled,
        )
        for entry in entries
    ]
    certificates: list[CertificatePayload] = []
    if include_certificates:
        certificates = [
            CertificatePayload(support=list(c.support), v=c.v, x=c.x) for c in impossibility_certificates()
        ]
        _debug(debug, f"Certified {len(certificates)} supports of size 2 or 4")
    return CatalogReport(rows=rows, certificates=certificates)


def run_biuni(
    *,
    family: Family,
    n: int | None,
    a: int,
    b: int,
    tau: list[int] | None,
    rho_exponent: int,
    c: list[str] | None = None,
    input_path: Path | None,
    lift: bool,
    rel_tol: float,
    unimodular_tol: float,
    debug: bool = False,
) -> BiunimodularReport:
    parameters: dict[str, Any]
    function: LineFunction
    if input_path is not None:
        function = load_line_function(input_path)
        family_name = "file"
        parameters = {"path": str(input_path), "N": function.n}
    elif n is None:
        raise ValueError("Provide --n N or --in <function.json>.")
    elif family == Family.GAUSSIAN:
        function = gaussian(n, a, b)
        family_name = family.value
        parameters = {"N": n, "a": a, "b": b} if n % 2 == 1 else {"N": n}
    else:
        spec = bjorck_saffari_spec(n, c=_parse_phases(c), tau=tau, rho_exponent=rho_exponent)
        function = bjorck_saffari(spec)
        family_name = family.value
        parameters = {
            "N": spec.modulus,
            "n": spec.n,
            "m": spec.m,
            "case": spec.case_tag,
            "tau": list(spec.tau),
            "c": [[value.real, value.imag] for value in spec.c],
            "rho_exponent": spec.rho_exponent,
        }
    _debug(debug, f"Function family={family_name} parameters={parameters}")

    report = BiunimodularReport(
        family=family_name,
        function=line_to_payload(function),
        biunimodular=is_biunimodular(function, unimodular_tol),
        parameters=parameters,
    )
    if lift:
        decomposition = schmidt_decompose(max_entangled_unitary(function, function, unimodular_tol), rel_tol)
        report = report.model_copy(
            update={
                "lifted_coefficients": [float(c) for c in decomposition.coefficients],
                "lifted_maximally_entangled": is_maximally_entangled(decomposition, rel_tol),
            }
        )
    return report


def run_qft(
    dims: tuple[int, int, int, int],
    rel_tol: float,
    *,
    include_classes: bool = False,
    include_coefficients: bool = False,
    include_bounds: bool = False,
    debug: bool = False,
) -> QftReport:
    spec = QftSpec(m1=dims[0], m2=dims[1], n1=dims[2], n2=dims[3])
    _debug(debug, f"QFT on Z_{spec.total} split as {spec.m1}x{spec.m2} -> {spec.n1}x{spec.n2}")
    report = QftReport(
        dims=spec.as_list(),
        schmidt_number=qft_schmidt_number(spec, rel_tol, check_oracle=True),
        maximally_entangled=qft_is_max_entangled(spec, rel_tol, check_oracle=True),
        coefficient_values=_coefficient_values(qft_coefficient_values(spec)),
    )
    update: dict[str, Any] = {}
    if include_classes:
        update["classes"] = [
            QftClassRow(base=cls.base, cardinality=cls.cardinality, coefficient=class_coefficient(spec, cls))
            for cls in equiv_classes(spec)
        ]
    if include_coefficients:
        update["coefficients"] = [float(c) for c in qft_analytic_schmidt(spec).sorted_coefficients()]
    if include_bounds:
        update["bounds"] = _bounds_payload(comm_cost_bounds(spec, rel_tol, check_oracle=True))
    return report.model_copy(update=update)


def run_qft_sweep(max_n: int, rel_tol: float, with_oracle: bool = True, debug: bool = False) -> list[QftSweepRow]:
    rows = qft_sweep(max_n, rel_tol, with_oracle=with_oracle)
    _debug(debug, f"Swept {len(rows)} factorizations with N <= {max_n} (oracle={with_oracle})")
    return [
        QftSweepRow(
            dims=row.spec.as_list(),
            class_count=row.class_count,
            schmidt_number=row.schmidt_number,
            maximally_entangled=row.max_entangled,
            coefficient_values=_coefficient_values(row.coefficient_values),
            bounds=_bounds_payload(row.bounds),
            oracle_schmidt_number=row.oracle_schmidt_number,
            oracle_maximally_entangled=row.oracle_max_entangled,
            oracle_coefficient_error=row.oracle_coefficient_error,
            agrees_with_oracle=row.agrees_with_oracle(COEFFICIENT_TOL),
        )
        for row in rows
    ]


def run_magic(
    dim: int,
    *,
    trials: int,
    seed: int,
    sphere_samples: int,
    rel_tol: float,
    debug: bool = False,
) -> PropertyReportPayload:
    _debug(debug, f"Checking determinant-gradient properties for N={dim}, trials={trials}, seed={seed}")
    report = check_properties(dim, trials=trials, seed=seed, sphere_samples=sphere_samples, rel_tol=rel_tol)
    return PropertyReportPayload(
        n=report.n,
        trials=report.trials,
        seed=report.seed,
        passed=report.passed,
        checks=[
            PropertyCheckPayload(
                name=check.name,
                passed=check.passed,
                max_residual=check.max_residual,
                threshold=check.threshold,
                samples=check.samples,
                detail=check.detail,
            )
            for check in report.checks
        ],
    )


def format_schmidt_summary(report: SchmidtReport) -> list[str]:
    return [
        f"dims (dA, dB, dA', dB'): {report.dims}",
        f"Schmidt number: {report.schmidt_number}",
        f"coefficients: {format_coefficients(report.coefficients)}",
        f"Hartley strength: {format_real(report.hartley_strength, 6)}",
        f"Schmidt strength: {format_real(report.schmidt_strength, 6)}",
        f"maximally entangled: {format_flag(report.maximally_entangled)}",
        f"reconstruction residual: {format_real(report.reconstruction_residual, 3)}",
    ]


def format_weyl_summary(report: WeylReport) -> list[str]:
    return [
        f"N: {report.n}",
        f"analytic coefficients: {format_coefficients(report.analytic_coefficients)}",
        f"oracle coefficients: {format_coefficients(report.oracle_coefficients)}",
        f"max coefficient error: {format_real(report.max_coefficient_error, 3)}",
        f"agrees with oracle: {format_flag(report.agrees_with_oracle)}",
        f"unitary: {format_flag(report.unitary)}",
        f"maximally entangled: {format_flag(report.maximally_entangled)}",
    ]


def format_catalog_table(report: CatalogReport) -> list[str]:
    lines = render_table(
        ["S", "construction", "coefficients", "unitarity residual", "max-entangled"],
        [
            [
                row.s,
                row.construction,
                format_coefficients(row.coefficients, 4),
                row.unitarity_residual,
                row.maximally_entangled,
            ]
            for row in report.rows
        ],
    )
    if report.certificates:
        lines.append("")
        lines.extend(
            render_table(
                ["P", "v", "x"],
                [[" ".join(map(str, cert.support)), cert.v, cert.x] for cert in report.certificates],
            )
        )
    return lines


def format_biuni_summary(report: BiunimodularReport) -> list[str]:
    lines = [
        f"family: {report.family}",
        f"parameters: {json.dumps(report.parameters, sort_keys=True)}",
        f"biunimodular: {format_flag(report.biunimodular)}",
    ]
    if report.lifted_coefficients is not None:
        lines.append(f"lifted Schmidt number: {len(report.lifted_coefficients)}")
        lines.append(f"lifted coefficients: {format_coefficients(report.lifted_coefficients)}")
        lines.append(f"lifted maximally entangled: {format_flag(report.lifted_maximally_entangled)}")
    return lines


def format_qft_summary(report: QftReport) -> list[str]:
    lines = [
        f"dims (M1, M2, N1, N2): {report.dims}",
        f"Schmidt number: {report.schmidt_number}",
        f"maximally entangled: {format_flag(report.maximally_entangled)}",
        "coefficient values: "
        + ", ".join(f"{format_real(item.value, 6)} x{item.multiplicity}" for item in report.coefficient_values),
    ]
    if report.coefficients is not None:
        lines.append(f"coefficients: {format_coefficients(report.coefficients)}")
    if report.bounds is not None:
        lines.append(
            f"communication bounds: {format_real(report.bounds.lower, 6)} <= C <= {format_real(report.bounds.upper, 6)}"
            f" (maximal: {format_flag(report.bounds.maximal)})"
        )
    if report.classes is not None:
        lines.append("")
        lines.extend(
            render_table(
                ["base", "cardinality", "coefficient"],
                [[cls.base, cls.cardinality, cls.coefficient] for cls in report.classes],
            )
        )
    return lines


def format_sweep_table(rows: list[QftSweepRow]) -> list[str]:
    return render_table(
        ["M1 M2 N1 N2", "classes", "Sch", "max-entangled", "lower", "upper", "oracle Sch", "oracle error"],
        [
            [
                " ".join(map(str, row.dims)),
                row.class_count,
                row.schmidt_number,
                row.maximally_entangled,
                row.bounds.lower,
                row.bounds.upper,
                row.oracle_schmidt_number,
                row.oracle_coefficient_error,
            ]
            for row in rows
        ],
    )


def format_property_table(report: PropertyReportPayload) -> list[str]:
    lines = [f"N={report.n} trials={report.trials} seed={report.seed} passed={format_flag(report.passed)}"]
    lines.extend(
        render_table(
            ["property", "passed", "max residual", "threshold", "samples"],
            [[c.name, c.passed, c.max_residual, c.threshold, c.samples] for c in report.checks],
        )
    )
    return lines


def format_acceptance_table(report: AcceptanceReport) -> list[str]:
    return render_table(
        ["criterion", "passed", "max residual", "detail"],
        [[c.name, c.passed, c.max_residual, c.detail] for c in report.checks],
    )


def _parse_phases(values: list[str] | None) -> list[complex] | None:
    if values is None:
        return None
    phases = []
    for text in values:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"--c expects RE,IM, got {text!r}")
        try:
            phases.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"--c expects RE,IM, got {text!r}") from exc
    return phases


def _coefficient_values(values: Any) -> list[CoefficientValue]:
    return [CoefficientValue(value=value, multiplicity=multiplicity) for value, multiplicity in values]


def _bounds_payload(bounds: CommCostBounds) -> CommCostPayload:
    return CommCostPayload(lower=bounds.lower, upper=bounds.upper, maximal=bounds.maximal)


def _settings(
    config: Path | None,
    output_format: OutputFormat | None,
    *,
    tol: float | None = None,
    seed: int | None = None,
    trials: int | None = None,
    sphere_samples: int | None = None,
    debug: bool | None = None,
) -> ResolvedCliSettings:
    settings = _guarded(
        lambda: resolve_cli_settings(
            config_path_override=config,
            rel_tol=tol,
            output_format=output_format.value if output_format is not None else None,
            seed=seed,
            trials=trials,
            sphere_samples=sphere_samples,
            debug=debug,
        )
    )
    if settings.config_path:
        _debug(settings.debug, f"Loaded config from {settings.config_path}")
    _debug(settings.debug, f"rel_tol={settings.rel_tol:g} unimodular_tol={settings.unimodular_tol:g}")
    return settings


def _guarded(action: Callable[[], T]) -> T:
    try:
        return action()
    except MatrixFileError as exc:
        _emit_error(str(exc), EXIT_USAGE)
    except (CertificationError, ClassConventionError) as exc:
        _emit_error(str(exc), EXIT_VERIFICATION_FAILED)
    except (ConfigError, FileNotFoundError, IsADirectoryError, ValueError) as exc:
        _emit_error(str(exc), EXIT_USAGE)
    except Exception as exc:  # pragma: no cover - safety net
        _emit_error(f"Unexpected error: {exc}", EXIT_USAGE)


def _emit(payload: Any, settings: ResolvedCliSettings, text_lines: Callable[[Any], list[str]]) -> None:
    if settings.output_format == OutputFormat.TEXT.value:
        for line in text_lines(payload):
            typer.echo(line)
        return
    typer.echo(dump_json(payload))


def _debug(enabled: bool, message: str) -> None:
    if enabled:
        typer.echo(f"[debug] {message}", err=True)


def _emit_error(message: str, code: int) -> NoReturn:
    payload: dict[str, Any] = {"error": message, "exit_code": code}
    typer.echo(json.dumps(payload, ensure_ascii=True), err=True)
    raise typer.Exit(code=code)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
