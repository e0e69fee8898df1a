from __future__ import annotations

from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field

from thermocasimir.core.errors import CasimirError
from thermocasimir.core.types import (
    DifferentiationConfig,
    DrudeParams,
    PlasmaParams,
    QuadratureConfig,
    RelaxationParams,
)


class ConfigError(CasimirError):
    """Raised when thermocasimir config cannot be parsed or saved."""


CURRENT_CONFIG_VERSION = 1

DEFAULTS_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.yml"


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    workers: int = Field(default=4, ge=1)


class PathsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    data_dir: str | None = None


class CasimirConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config_version: int = CURRENT_CONFIG_VERSION
    log_level: str = "info"
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    differentiation: DifferentiationConfig = Field(default_factory=DifferentiationConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)


class LoadedConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: CasimirConfig
    existed: bool


class OscillatorPreset(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a1: float
    a2: float
    a3: float
    c: float


class MaterialPresets(BaseModel):
    model_config = ConfigDict(extra="forbid")

    drude: dict[str, DrudeParams] = Field(default_factory=dict)
    plasma: dict[str, PlasmaParams] = Field(default_factory=dict)
    relaxation: dict[str, RelaxationParams] = Field(default_factory=dict)
    oscillator: dict[str, OscillatorPreset] = Field(default_factory=dict)


def load_config(*, path: Path | None) -> LoadedConfig:
    if path is None or not path.exists():
        return LoadedConfig(config=CasimirConfig(), existed=False)

    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid config yaml at {path}: {exc}") from exc

    if raw is None:
        return LoadedConfig(config=CasimirConfig(), existed=True)
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")

    try:
        parsed = CasimirConfig.model_validate(raw)
    except Exception as exc:
        raise ConfigError(f"invalid config schema at {path}: {exc}") from exc

    if parsed.config_version > CURRENT_CONFIG_VERSION:
        raise ConfigError(
            f"config version {parsed.config_version} is newer than supported version {CURRENT_CONFIG_VERSION}"
        )
    return LoadedConfig(config=parsed, existed=True)


def save_config_atomic(*, config: CasimirConfig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")

    payload = config.model_dump(mode="json")
    content = yaml.safe_dump(payload, sort_keys=False)

    tmp_path.write_text(content, encoding="utf-8")
    tmp_path.replace(path)


def load_presets(path: Path = DEFAULTS_PATH) -> MaterialPresets:
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read presets at {path}: {exc}") from exc

    try:
        return MaterialPresets.model_validate(raw or {})
    except Exception as exc:
        raise ConfigError(f"invalid presets at {path}: {exc}") from exc
