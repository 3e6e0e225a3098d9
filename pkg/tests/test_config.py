from __future__ import annotations

import os
from pathlib import Path

import pytest

from opschmidt.config import ConfigError, resolve_cli_settings


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch):
    for name in list(os.environ):
        if name.startswith("OPSCHMIDT_"):
            monkeypatch.delenv(name)


def test_defaults_without_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)

    settings = resolve_cli_settings()
    assert settings.config_path is None
    assert settings.rel_tol == 1e-9
    assert settings.unimodular_tol == 1e-10
    assert settings.output_format == "json"
    assert settings.seed == 0
    assert settings.trials == 100
    assert settings.sphere_samples == 10_000
    assert settings.debug is False


def test_resolve_cli_settings_reads_ini(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "opschmidt.ini"
    cfg.write_text(
        "\n".join(
            [
                "[opschmidt]",
                "rel_tol = 1e-8",
                "unimodular_tol = 1e-6",
                "output_format = TEXT",
                "seed = 7",
                "trials = 12",
                "sphere_samples = 50",
                "debug = yes",
            ]
        ),
        encoding="utf-8",
    )

    settings = resolve_cli_settings()
    assert settings.config_path == cfg
    assert settings.rel_tol == 1e-8
    assert settings.unimodular_tol == 1e-6
    assert settings.output_format == "text"
    assert settings.seed == 7
    assert settings.trials == 12
    assert settings.sphere_samples == 50
    assert settings.debug is True


def test_local_ini_overrides_default_ini(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "opschmidt.ini").write_text("[opschmidt]\nseed = 1\ntrials = 5\n", encoding="utf-8")
    local = tmp_path / "opschmidt.local.ini"
    local.write_text("[opschmidt]\nseed = 2\n", encoding="utf-8")

    settings = resolve_cli_settings()
    assert settings.config_path == local
    assert settings.seed == 2
    assert settings.trials == 5


def test_env_overrides_ini(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    cfg = tmp_path / "custom.ini"
    cfg.write_text("[opschmidt]\nrel_tol = 1e-6\nseed = 3\ndebug = true\n", encoding="utf-8")
    monkeypatch.setenv("OPSCHMIDT_TOL", "1e-7")
    monkeypatch.setenv("OPSCHMIDT_SEED", "11")
    monkeypatch.setenv("OPSCHMIDT_FORMAT", "text")
    monkeypatch.setenv("OPSCHMIDT_DEBUG", "off")

    settings = resolve_cli_settings(config_path_override=cfg)
    assert settings.config_path == cfg
    assert settings.rel_tol == 1e-7
    assert settings.seed == 11
    assert settings.output_format == "text"
    assert settings.debug is False


def test_env_config_path_is_used(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    cfg = tmp_path / "env.ini"
    cfg.write_text("[opschmidt]\ntrials = 4\n", encoding="utf-8")
    monkeypatch.setenv("OPSCHMIDT_CONFIG", str(cfg))

    settings = resolve_cli_settings()
    assert settings.config_path == cfg
    assert settings.trials == 4


def test_cli_overrides_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("OPSCHMIDT_TRIALS", "7")
    monkeypatch.setenv("OPSCHMIDT_DEBUG", "false")

    settings = resolve_cli_settings(trials=3, debug=True, rel_tol=1e-5)
    assert settings.trials == 3
    assert settings.debug is True
    assert settings.rel_tol == 1e-5


def test_missing_config_file_raises(tmp_path: Path):
    with pytest.raises(ConfigError, match="not found"):
        resolve_cli_settings(config_path_override=tmp_path / "nope.ini")


def test_invalid_bool_raises(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("OPSCHMIDT_DEBUG", "maybe")
    with pytest.raises(ConfigError, match="boolean"):
        resolve_cli_settings()


def test_invalid_integer_raises(tmp_path: Path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[opschmidt]\nseed = seven\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="integer"):
        resolve_cli_settings(config_path_override=cfg)


@pytest.mark.parametrize("value", ["0", "-1e-9", "nan", "inf"])
def test_tolerance_must_be_positive_and_finite(value: str, tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("OPSCHMIDT_TOL", value)
    with pytest.raises(ConfigError, match="rel_tol"):
        resolve_cli_settings()


def test_unknown_output_format_raises(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(ConfigError, match="output_format"):
        resolve_cli_settings(output_format="yaml")


@pytest.mark.parametrize(("field", "value"), [("seed", -1), ("trials", 0), ("sphere_samples", 0)])
def test_integer_ranges(field: str, value: int, tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(ConfigError, match=field):
        resolve_cli_settings(**{field: value})
