"""Optical constants ingestion, Kramers-Kronig transform and spectral tables.

Optical constants CSV: columns ``omega_ev,n_re,n_im`` (header optional),
``#`` comment lines allowed. Spectral tables are cached as ``zeta_ev,eps``.
"""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike
from pydantic import ValidationError
from scipy import integrate

from thermocasimir.core.errors import DomainError, IngestionError
from thermocasimir.core.types import DrudeParams, OpticalConstantsTable, SpectralTable
from thermocasimir.physics.dispersion import drude_real_frequency

logger = logging.getLogger(__name__)

OPTICAL_COLUMNS = ("omega_ev", "n_re", "n_im")
SPECTRAL_COLUMNS = ("zeta_ev", "eps")


def _data_rows(path: Path) -> list[tuple[int, list[str]]]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IngestionError(f"cannot read file: {exc}", path=path) from exc

    rows: list[tuple[int, list[str]]] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = next(csv.reader([stripped]))
        rows.append((line_no, [field.strip() for field in fields]))
    return rows


def _parse_numeric_rows(
    path: Path,
    columns: tuple[str, ...],
) -> list[tuple[int, tuple[float, ...]]]:
    rows = _data_rows(path)
    if rows and [field.lower() for field in rows[0][1]] == list(columns):
        rows = rows[1:]

    parsed: list[tuple[int, tuple[float, ...]]] = []
    for line_no, fields in rows:
        if len(fields) != len(columns):
            raise IngestionError(
                f"expected {len(columns)} columns ({','.join(columns)}), got {len(fields)}",
                path=path,
                line=line_no,
            )
        try:
            values = tuple(float(field) for field in fields)
        except ValueError as exc:
            raise IngestionError(f"non-numeric value: {exc}", path=path, line=line_no) from exc
        if not all(math.isfinite(value) for value in values):
            raise IngestionError("non-finite value", path=path, line=line_no)
        parsed.append((line_no, values))

    if not parsed:
        raise IngestionError("no data rows", path=path)
    return parsed


def load_optical_table(path: Path, format: str = "csv") -> OpticalConstantsTable:
    if format != "csv":
        raise IngestionError(f"unsupported optical data format: {format}", path=path)

    parsed = _parse_numeric_rows(path, OPTICAL_COLUMNS)
    previous_omega = 0.0
    for line_no, (omega, _, n_im) in parsed:
        if omega == previous_omega:
            raise IngestionError(f"duplicate omega {omega:g}", path=path, line=line_no)
        if omega < previous_omega or omega <= 0:
            raise IngestionError(
                f"omega {omega:g} out of order (must be positive and increasing)",
                path=path,
                line=line_no,
            )
        if n_im < 0:
            raise IngestionError(f"negative n_im {n_im:g}", path=path, line=line_no)
        previous_omega = omega

    table = OpticalConstantsTable(entries=[values for _, values in parsed], source=str(path))
    logger.info("loaded %d optical constants from %s", len(table.entries), path)
    return table


def write_optical_table(table: OpticalConstantsTable, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(f"# source: {table.source}\n")
        writer = csv.writer(handle)
        writer.writerow(OPTICAL_COLUMNS)
        for omega, n_re, n_im in table.entries:
            writer.writerow([repr(omega), repr(n_re), repr(n_im)])
    return path


def drude_optical_table(params: DrudeParams, omega_grid: ArrayLike) -> OpticalConstantsTable:
    """Synthetic optical constants n = sqrt(eps(omega)) of a Drude metal."""
    omega = np.asarray(omega_grid, dtype=float)
    n = np.sqrt(np.asarray(drude_real_frequency(omega, params), dtype=complex))
    entries = [(float(w), float(c.real), float(abs(c.imag))) for w, c in zip(omega, n)]
    return OpticalConstantsTable(
        entries=entries,
        source=f"drude-synthetic omega_p={params.omega_p:g} nu={params.nu:g}",
    )


def _high_tail_coefficient(omega: np.ndarray, eps_im: np.ndarray) -> float:
    """b in eps'' ~ b / omega^3, fitted over the last tabulated decade."""
    window = (omega >= omega[-1] / 10.0) & (eps_im > 0)
    if not np.any(window):
        return 0.0
    return float(np.exp(np.mean(np.log(eps_im[window]) + 3.0 * np.log(omega[window]))))


def _high_tail_integral(b: float, omega_max: float, zeta: np.ndarray) -> np.ndarray:
    # integral_W^inf b / (omega^2 (omega^2 + zeta^2)) d omega
    t = zeta / omega_max
    series = (b / omega_max**3) * (1.0 / 3.0 - t**2 / 5.0 + t**4 / 7.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (b / zeta**2) * (1.0 / omega_max - np.arctan(t) / zeta)
    return np.where(t < 1e-3, series, closed)


def kramers_kronig(table: OpticalConstantsTable, zeta: ArrayLike) -> float | np.ndarray:
    """eps(i zeta) = 1 + (2/pi) int omega eps''(omega) / (omega^2 + zeta^2) d omega."""
    z = np.asarray(zeta, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError(f"zeta must be > 0, got {zeta!r}")

    omega, n_re, n_im = table.arrays()
    eps_im = 2.0 * n_re * n_im
    zz = np.atleast_1d(z)[:, None]

    if omega.size >= 2:
        integrand = omega**2 * eps_im / (omega**2 + zz**2)
        body = integrate.simpson(integrand, x=np.log(omega), axis=-1)
    else:
        body = np.zeros(zz.shape[0])

    # omega * eps'' held at its first tabulated value below the grid.
    c_low = omega[0] * eps_im[0]
    low = (c_low / zz[:, 0]) * np.arctan(omega[0] / zz[:, 0])
    high = _high_tail_integral(_high_tail_coefficient(omega, eps_im), omega[-1], zz[:, 0])

    result = 1.0 + (2.0 / math.pi) * (body + low + high)
    return float(result[0]) if np.ndim(zeta) == 0 else result.reshape(z.shape)


def build_spectral_table(
    table: OpticalConstantsTable,
    zeta_grid: ArrayLike,
    *,
    source: str | None = None,
) -> SpectralTable:
    grid = np.asarray(zeta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("zeta grid must be a non-empty 1-d sequence")
    if grid.size < 2:
        raise DomainError("zeta grid needs at least 2 points for a spectral table")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("zeta grid must be positive and strictly increasing")

    eps = np.asarray(kramers_kronig(table, grid), dtype=float)
    label = source or table.source
    bad_points = np.concatenate(([False], np.diff(eps) >= 0)) | (eps < 1.0)
    if np.any(bad_points):
        bad = int(np.argmax(bad_points))
        raise IngestionError(
            f"Kramers-Kronig output is not monotone decreasing near zeta={grid[bad]:g} eV",
            path=label,
        )
    return SpectralTable(entries=[(float(z), float(e)) for z, e in zip(grid, eps)], source=label)


def default_zeta_grid(points: int = 141) -> np.ndarray:
    return np.logspace(-4.0, 3.0, points)


def interpolate(table: SpectralTable, zeta: ArrayLike) -> float | np.ndarray:
    """Log-log linear interpolation of eps - 1.

    Below the grid eps - 1 ~ 1/zeta (Drude form), above it eps - 1 ~ 1/zeta^2.
    Grid nodes return the stored value exactly.
    """
    z = np.asarray(zeta, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError(f"zeta must be > 0, got {zeta!r}")

    zs, es = table.zeta, table.eps
    excess = np.maximum(es - 1.0, np.finfo(float).tiny)
    inner = np.exp(np.interp(np.log(z), np.log(zs), np.log(excess)))
    below = excess[0] * zs[0] / z
    above = excess[-1] * (zs[-1] / z) ** 2
    result = 1.0 + np.where(z < zs[0], below, np.where(z > zs[-1], above, inner))

    idx = np.minimum(np.searchsorted(zs, z), zs.size - 1)
    result = np.where(zs[idx] == z, es[idx], result)
    return float(result) if np.ndim(zeta) == 0 else result


def write_spectral_table(table: SpectralTable, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        if table.source:
            handle.write(f"# source: {table.source}\n")
        writer = csv.writer(handle)
        writer.writerow(SPECTRAL_COLUMNS)
        for zeta, eps in table.entries:
            writer.writerow([repr(zeta), repr(eps)])
    return path


def load_spectral_table(path: Path) -> SpectralTable:
    parsed = _parse_numeric_rows(path, SPECTRAL_COLUMNS)
    try:
        return SpectralTable(entries=[values for _, values in parsed], source=str(path))
    except ValidationError as exc:
        raise IngestionError(f"invalid spectral table: {exc.errors()[0]['msg']}", path=path) from exc


def sniff_columns(path: Path) -> tuple[str, ...] | None:
    """Header of a data file, if its first data row is non-numeric."""
    rows = _data_rows(path)
    if not rows:
        return None
    header = tuple(field.lower() for field in rows[0][1])
    try:
        [float(field) for field in header]
    except ValueError:
        return header
    return None
