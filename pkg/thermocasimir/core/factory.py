"""Factory functions turning CLI strings and config into runtime objects."""

from __future__ import annotations

import logging
import os
from pathlib import Path

from thermocasimir.core.config import CasimirConfig, MaterialPresets, load_presets
from thermocasimir.core.errors import ModelSpecError
from thermocasimir.core.events import EventBus
from thermocasimir.core.runner import RunnerOptions, SweepRunner
from thermocasimir.core.types import DispersionModel, Method, PlasmaParams, Quantity
from thermocasimir.physics.optical_data import (
    SPECTRAL_COLUMNS,
    build_spectral_table,
    default_zeta_grid,
    load_optical_table,
    load_spectral_table,
    sniff_columns,
)

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "CASIMIR_DATA_DIR"


def resolve_data_dir(config: CasimirConfig | None = None) -> Path | None:
    """CASIMIR_DATA_DIR wins over ``paths.data_dir``."""
    value = os.environ.get(DATA_DIR_ENV) or (config.paths.data_dir if config else None)
    return Path(value).expanduser() if value else None


def _parse_float(spec: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ModelSpecError(f"model spec {spec!r}: {text!r} is not a number") from exc


def _table_model(spec: str, name: str, data_dir: Path | None) -> DispersionModel:
    path = Path(name).expanduser()
    if not path.exists() and data_dir is not None and (data_dir / name).exists():
        path = data_dir / name
    if not path.exists():
        raise ModelSpecError(f"model spec {spec!r}: table {name!r} not found (searched {data_dir or 'cwd'})")

    if sniff_columns(path) == SPECTRAL_COLUMNS:
        table = load_spectral_table(path)
    else:
        optical = load_optical_table(path)
        logger.info("building spectral table from %s by Kramers-Kronig", path)
        table = build_spectral_table(optical, default_zeta_grid())
    return DispersionModel.tabulated(table, label=spec)


def parse_model_spec(
    spec: str,
    *,
    presets: MaterialPresets | None = None,
    data_dir: Path | None = None,
) -> DispersionModel:
    """Build a model from ``ideal``, ``ideal-mim``, ``const:<eps>``, ``drude-<preset>[-bg]``,
    ``plasma:<omega_p>`` or ``table:<path>``."""
    text = spec.strip()
    if text == "ideal":
        return DispersionModel.ideal(sdm=True)
    if text == "ideal-mim":
        return DispersionModel.ideal(sdm=False)

    kind, sep, arg = text.partition(":")
    if sep:
        if kind == "const":
            eps0 = _parse_float(spec, arg)
            if not eps0 > 1.0:
                raise ModelSpecError(f"model spec {spec!r}: constant permittivity must exceed 1")
            return DispersionModel.constant(eps0)
        if kind == "plasma":
            omega_p = _parse_float(spec, arg)
            if not omega_p > 0.0:
                raise ModelSpecError(f"model spec {spec!r}: plasma frequency must be positive")
            return DispersionModel.plasma_model(PlasmaParams(omega_p=omega_p), label=text)
        if kind == "table":
            if not arg:
                raise ModelSpecError(f"model spec {spec!r}: missing table path")
            return _table_model(text, arg, data_dir)
        raise ModelSpecError(f"unknown model kind {kind!r} in {spec!r}")

    if text.startswith("drude-"):
        presets = presets or load_presets()
        name = text.removeprefix("drude-")
        with_bg = name.endswith("-bg")
        name = name.removesuffix("-bg")
        if name not in presets.drude:
            raise ModelSpecError(f"unknown drude preset {name!r}; known: {', '.join(sorted(presets.drude))}")
        relaxation = None
        if with_bg:
            if name not in presets.relaxation:
                raise ModelSpecError(f"preset {name!r} has no Bloch-Gruneisen relaxation constants")
            relaxation = presets.relaxation[name]
        return DispersionModel.drude_model(presets.drude[name], relaxation, label=text)

    raise ModelSpecError(
        f"unknown model spec {spec!r}; expected ideal, ideal-mim, const:<eps>, drude-gold, "
        "drude-gold-bg, plasma:<omega_p> or table:<path>"
    )


def build_runner(
    config: CasimirConfig,
    *,
    quantity: Quantity,
    method: Method = Method.AUTO,
    event_bus: EventBus | None = None,
) -> SweepRunner:
    """Construct a SweepRunner wired to the config's tolerances and data directory."""
    presets = load_presets()
    data_dir = resolve_data_dir(config)
    return SweepRunner(
        options=RunnerOptions(quantity=quantity, method=method, workers=config.sweep.workers),
        quadrature=config.quadrature,
        differentiation=config.differentiation,
        resolve_model=lambda spec: parse_model_spec(spec, presets=presets, data_dir=data_dir),
        event_bus=event_bus,
    )
