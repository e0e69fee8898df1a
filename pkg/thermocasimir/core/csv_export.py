from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from thermocasimir.core.types import InducedThermo, ModeBreakdown, ThermoResult

THERMO_COLUMNS = (
    "a_um",
    "t_kelvin",
    "model",
    "pressure_mpa",
    "free_energy_nj_m2",
    "internal_energy_nj_m2",
    "entropy_nj_m2_k",
    "terms_used",
    "converged",
    "method",
    "truncation_bound_mpa",
)

MODE_COLUMNS = ("m", "pressure_mpa", "fraction_pct", "tm_share_pct", "te_share_pct")

COEFFICIENT_COLUMNS = ("m", "y", "a_coeff", "b_coeff")

TOY_COLUMNS = ("kind", "temperature", "free_energy", "entropy", "terms_used", "converged")

NU_COLUMNS = ("t_kelvin", "nu_ev")


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".9g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def thermo_row(result: ThermoResult) -> dict[str, Any]:
    return {
        "a_um": result.a_um,
        "t_kelvin": result.t_kelvin,
        "model": result.model,
        "pressure_mpa": result.pressure,
        "free_energy_nj_m2": result.free_energy,
        "internal_energy_nj_m2": result.internal_energy,
        "entropy_nj_m2_k": result.entropy,
        "terms_used": result.terms_used,
        "converged": result.converged,
        "method": result.method,
        "truncation_bound_mpa": result.truncation_bound,
    }


def mode_rows(breakdown: ModeBreakdown) -> list[dict[str, Any]]:
    return [
        {
            "m": mode.m,
            "pressure_mpa": mode.pressure,
            "fraction_pct": mode.fraction,
            "tm_share_pct": mode.tm_share,
            "te_share_pct": mode.te_share,
        }
        for mode in breakdown.modes
    ]


def coefficient_rows(breakdown: ModeBreakdown) -> list[dict[str, Any]]:
    return [sample.model_dump() for sample in breakdown.coefficient_samples]


def toy_row(kind: str, result: InducedThermo) -> dict[str, Any]:
    return {
        "kind": kind,
        "temperature": result.temperature,
        "free_energy": result.free_energy,
        "entropy": result.entropy,
        "terms_used": result.terms_used,
        "converged": result.converged,
    }


def render_csv(rows: Iterable[Mapping[str, Any]], fieldnames: Sequence[str]) -> str:
    """CSV text with a header row; floats carry 9 significant digits."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: format_value(row.get(name)) for name in fieldnames})
    return buffer.getvalue()
