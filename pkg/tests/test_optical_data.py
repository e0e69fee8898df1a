from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from thermocasimir.core.errors import DomainError, IngestionError
from thermocasimir.core.types import DispersionModel, DrudeParams
from thermocasimir.physics.dispersion import eps_drude, eval_model
from thermocasimir.physics.optical_data import (
    build_spectral_table,
    default_zeta_grid,
    drude_optical_table,
    interpolate,
    kramers_kronig,
    load_optical_table,
    load_spectral_table,
    sniff_columns,
    write_optical_table,
    write_spectral_table,
)

OMEGA_GRID = np.geomspace(1e-4, 1e3, 400)


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


@pytest.fixture()
def drude_optical(gold_drude_params: DrudeParams):
    return drude_optical_table(gold_drude_params, OMEGA_GRID)


# -- ingestion ------------------------------------------------------------------------


def test_written_optical_table_loads_back(tmp_path: Path, drude_optical) -> None:
    path = write_optical_table(drude_optical, tmp_path / "gold.csv")
    loaded = load_optical_table(path)
    assert len(loaded.entries) == 400
    assert loaded.entries[0][0] == pytest.approx(1e-4)


def test_out_of_order_row_reports_line(fixtures_dir: Path) -> None:
    with pytest.raises(IngestionError) as excinfo:
        load_optical_table(fixtures_dir / "optical_unsorted.csv")
    assert excinfo.value.line == 5
    assert "optical_unsorted.csv:5" in str(excinfo.value)


def test_duplicate_omega_reports_line(tmp_path: Path) -> None:
    path = _write(tmp_path / "dup.csv", "omega_ev,n_re,n_im\n0.1,1,2\n0.1,1,2\n")
    with pytest.raises(IngestionError, match="duplicate omega") as excinfo:
        load_optical_table(path)
    assert excinfo.value.line == 3


def test_non_numeric_value_reports_line(tmp_path: Path) -> None:
    path = _write(tmp_path / "text.csv", "# comment\n0.1,1,2\n0.2,one,2\n")
    with pytest.raises(IngestionError, match="non-numeric") as excinfo:
        load_optical_table(path)
    assert excinfo.value.line == 3


def test_wrong_column_count(tmp_path: Path) -> None:
    path = _write(tmp_path / "cols.csv", "0.1,1\n")
    with pytest.raises(IngestionError, match="expected 3 columns"):
        load_optical_table(path)


def test_negative_absorption_rejected(tmp_path: Path) -> None:
    path = _write(tmp_path / "neg.csv", "0.1,1,2\n0.2,1,-0.5\n")
    with pytest.raises(IngestionError, match="negative n_im"):
        load_optical_table(path)


def test_empty_file_rejected(tmp_path: Path) -> None:
    path = _write(tmp_path / "empty.csv", "# nothing here\n")
    with pytest.raises(IngestionError, match="no data rows"):
        load_optical_table(path)


def test_missing_file_rejected(tmp_path: Path) -> None:
    with pytest.raises(IngestionError, match="cannot read"):
        load_optical_table(tmp_path / "absent.csv")


# -- kramers-kronig ---------------------------------------------------------------------


@pytest.mark.parametrize("zeta", [0.01, 0.1, 1.0, 10.0])
def test_kramers_kronig_recovers_drude(drude_optical, gold_drude_params: DrudeParams, zeta: float) -> None:
    assert kramers_kronig(drude_optical, zeta) == pytest.approx(eps_drude(zeta, gold_drude_params), rel=1e-2)


def test_kramers_kronig_rejects_non_positive_zeta(drude_optical) -> None:
    with pytest.raises(DomainError):
        kramers_kronig(drude_optical, 0.0)


def test_spectral_table_is_monotone(drude_optical) -> None:
    table = build_spectral_table(drude_optical, default_zeta_grid(71))
    assert len(table.entries) == 71
    assert np.all(np.diff(table.eps) < 0)
    assert np.all(table.eps >= 1.0)


@pytest.mark.parametrize(
    "grid",
    [[], [0.1], [1.0, 0.5], [-1.0, 1.0]],
)
def test_spectral_table_grid_validation(drude_optical, grid) -> None:
    with pytest.raises(DomainError):
        build_spectral_table(drude_optical, grid)


# -- interpolation ------------------------------------------------------------------------


def test_interpolation_returns_nodes_exactly(fixtures_dir: Path) -> None:
    table = load_spectral_table(fixtures_dir / "spectral_drude.csv")
    for zeta, eps in table.entries:
        assert interpolate(table, zeta) == eps


def test_interpolation_between_nodes_follows_drude(fixtures_dir: Path, gold_drude_params: DrudeParams) -> None:
    table = load_spectral_table(fixtures_dir / "spectral_drude.csv")
    zeta = np.geomspace(2e-3, 50.0, 30)
    values = np.asarray(interpolate(table, zeta))
    assert np.all(np.diff(values) < 0)
    np.testing.assert_allclose(values, eps_drude(zeta, gold_drude_params), rtol=0.25)


def test_interpolation_extrapolates_outside_grid(fixtures_dir: Path) -> None:
    table = load_spectral_table(fixtures_dir / "spectral_drude.csv")
    assert interpolate(table, 1e-4) == pytest.approx(1.0 + 2250000.0 * 10.0, rel=1e-9)
    assert interpolate(table, 1000.0) == pytest.approx(1.0 + 0.0080971659919028 / 100.0, rel=1e-9)


def test_interpolation_rejects_non_positive_zeta(fixtures_dir: Path) -> None:
    table = load_spectral_table(fixtures_dir / "spectral_drude.csv")
    with pytest.raises(DomainError):
        interpolate(table, -1.0)


def test_tabulated_model_uses_interpolation(fixtures_dir: Path) -> None:
    table = load_spectral_table(fixtures_dir / "spectral_drude.csv")
    model = DispersionModel.tabulated(table)
    assert eval_model(model, 1.0, 10.0) == pytest.approx(79.2608695652174)
    assert eval_model(model, 1.0, 10.0) == eval_model(model, 1.0, 300.0)


# -- spectral table files -------------------------------------------------------------------


def test_spectral_table_round_trip(tmp_path: Path, drude_optical) -> None:
    table = build_spectral_table(drude_optical, default_zeta_grid(21), source="synthetic")
    loaded = load_spectral_table(write_spectral_table(table, tmp_path / "eps.csv"))
    np.testing.assert_array_equal(loaded.eps, table.eps)


def test_invalid_spectral_table_is_an_ingestion_error(tmp_path: Path) -> None:
    path = _write(tmp_path / "rising.csv", "zeta_ev,eps\n0.1,5\n0.2,6\n")
    with pytest.raises(IngestionError, match="invalid spectral table"):
        load_spectral_table(path)


def test_sniff_columns(fixtures_dir: Path, tmp_path: Path) -> None:
    assert sniff_columns(fixtures_dir / "spectral_drude.csv") == ("zeta_ev", "eps")
    assert sniff_columns(_write(tmp_path / "bare.csv", "0.1,1,2\n")) is None
