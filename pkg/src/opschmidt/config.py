from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass
from pathlib import Path


CONFIG_SECTION = "opschmidt"
DEFAULT_CONFIG_FILENAME = "opschmidt.ini"
LOCAL_CONFIG_FILENAME = "opschmidt.local.ini"
OUTPUT_FORMATS = ("json", "text")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ResolvedCliSettings:
    config_path: Path | None
    rel_tol: float
    unimodular_tol: float
    output_format: str
    seed: int
    trials: int
    sphere_samples: int
    debug: bool


def resolve_cli_settings(
    *,
    config_path_override: Path | None = None,
    rel_tol: float | None = None,
    unimodular_tol: float | None = None,
    output_format: str | None = None,
    seed: int | None = None,
    trials: int | None = None,
    sphere_samples: int | None = None,
    debug: bool | None = None,
) -> ResolvedCliSettings:
    config_paths = _resolve_config_paths(config_path_override)
    file_values = _read_config_files(config_paths)

    defaults: dict[str, object] = {
        "rel_tol": 1e-9,
        "unimodular_tol": 1e-10,
        "output_format": "json",
        "seed": 0,
        "trials": 100,
        "sphere_samples": 10_000,
        "debug": False,
    }

    merged: dict[str, object] = defaults.copy()
    merged.update(file_values)
    merged.update(_env_overrides())

    cli_overrides = {
        key: value
        for key, value in (
            ("rel_tol", rel_tol),
            ("unimodular_tol", unimodular_tol),
            ("output_format", output_format),
            ("seed", seed),
            ("trials", trials),
            ("sphere_samples", sphere_samples),
            ("debug", debug),
        )
        if value is not None
    }
    merged.update(cli_overrides)

    normalized = _validate_and_normalize(merged)
    effective_config_path = config_paths[-1] if config_paths else None
    return ResolvedCliSettings(config_path=effective_config_path, **normalized)


def _resolve_config_paths(config_path_override: Path | None) -> list[Path]:
    if config_path_override is not None:
        return [config_path_override]

    env_path = os.getenv("OPSCHMIDT_CONFIG")
    if env_path:
        return [Path(env_path)]

    config_paths: list[Path] = []
    default_path = Path.cwd() / DEFAULT_CONFIG_FILENAME
    local_path = Path.cwd() / LOCAL_CONFIG_FILENAME
    if default_path.exists():
        config_paths.append(default_path)
    if local_path.exists():
        config_paths.append(local_path)
    return config_paths


def _read_config_files(config_paths: list[Path]) -> dict[str, object]:
    if not config_paths:
        return {}

    parser = configparser.ConfigParser()
    for config_path in config_paths:
        if not config_path.exists():
            raise ConfigError(f"Config file not found: {config_path}")
        if not config_path.is_file():
            raise ConfigError(f"Config path is not a file: {config_path}")

        try:
            read_files = parser.read(config_path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"Failed to parse config file '{config_path}': {exc}") from exc

        if not read_files:
            raise ConfigError(f"Failed to read config file: {config_path}")

    if not parser.has_section(CONFIG_SECTION):
        return {}

    section = parser[CONFIG_SECTION]
    values: dict[str, object] = {}

    for key in ("rel_tol", "unimodular_tol"):
        if key in section:
            values[key] = _parse_float(section.get(key, fallback=""), key)
    if "output_format" in section:
        values["output_format"] = section.get("output_format", fallback="").strip()
    for key in ("seed", "trials", "sphere_samples"):
        if key in section:
            values[key] = _parse_int(section.get(key, fallback=""), key)
    if "debug" in section:
        values["debug"] = _parse_bool(section.get("debug", fallback=""), "debug")

    return values


def _env_overrides() -> dict[str, object]:
    env = os.environ
    values: dict[str, object] = {}

    if env.get("OPSCHMIDT_TOL") is not None:
        values["rel_tol"] = _parse_float(env["OPSCHMIDT_TOL"], "OPSCHMIDT_TOL")
    if env.get("OPSCHMIDT_UNIMODULAR_TOL") is not None:
        values["unimodular_tol"] = _parse_float(env["OPSCHMIDT_UNIMODULAR_TOL"], "OPSCHMIDT_UNIMODULAR_TOL")
    if env.get("OPSCHMIDT_FORMAT") is not None:
        values["output_format"] = env["OPSCHMIDT_FORMAT"]
    if env.get("OPSCHMIDT_SEED") is not None:
        values["seed"] = _parse_int(env["OPSCHMIDT_SEED"], "OPSCHMIDT_SEED")
    if env.get("OPSCHMIDT_TRIALS") is not None:
        values["trials"] = _parse_int(env["OPSCHMIDT_TRIALS"], "OPSCHMIDT_TRIALS")
    if env.get("OPSCHMIDT_SPHERE_SAMPLES") is not None:
        values["sphere_samples"] = _parse_int(env["OPSCHMIDT_SPHERE_SAMPLES"], "OPSCHMIDT_SPHERE_SAMPLES")
    if env.get("OPSCHMIDT_DEBUG") is not None:
        values["debug"] = _parse_bool(env["OPSCHMIDT_DEBUG"], "OPSCHMIDT_DEBUG")

    return values


def _validate_and_normalize(values: dict[str, object]) -> dict[str, object]:
    rel_tol = _positive_tolerance(values.get("rel_tol"), "rel_tol")
    unimodular_tol = _positive_tolerance(values.get("unimodular_tol"), "unimodular_tol")

    output_format = str(values.get("output_format", "")).strip().lower()
    if output_format not in OUTPUT_FORMATS:
        raise ConfigError("output_format must be 'json' or 'text'")

    seed = int(values.get("seed", 0))
    if seed < 0:
        raise ConfigError("seed must be >= 0")

    trials = int(values.get("trials", 0))
    if trials < 1:
        raise ConfigError("trials must be >= 1")

    sphere_samples = int(values.get("sphere_samples", 0))
    if sphere_samples < 1:
        raise ConfigError("sphere_samples must be >= 1")

    return {
        "rel_tol": rel_tol,
        "unimodular_tol": unimodular_tol,
        "output_format": output_format,
        "seed": seed,
        "trials": trials,
        "sphere_samples": sphere_samples,
        "debug": bool(values.get("debug", False)),
    }


def _positive_tolerance(value: object, field_name: str) -> float:
    tolerance = float(value)  # type: ignore[arg-type]
    if not math.isfinite(tolerance) or tolerance <= 0.0:
        raise ConfigError(f"{field_name} must be a positive number, got {value!r}")
    return tolerance


def _parse_bool(value: str, field_name: str) -> bool:
    lowered = value.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(f"Invalid boolean for {field_name}: {value!r}")


def _parse_int(value: str, field_name: str) -> int:
    try:
        return int(value.strip())
    except ValueError as exc:
        raise ConfigError(f"Invalid integer for {field_name}: {value!r}") from exc


def _parse_float(value: str, field_name: str) -> float:
    try:
        return float(value.strip())
    except ValueError as exc:
        raise ConfigError(f"Invalid number for {field_name}: {value!r}") from exc
