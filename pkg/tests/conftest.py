from __future__ import annotations

from pathlib import Path

import pytest

from thermocasimir.core.config import load_presets
from thermocasimir.core.types import DispersionModel, DrudeParams, QuadratureConfig, RelaxationParams

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def gold_drude_params() -> DrudeParams:
    return load_presets().drude["gold"]


@pytest.fixture(scope="session")
def gold_relaxation() -> RelaxationParams:
    return load_presets().relaxation["gold"]


@pytest.fixture(scope="session")
def gold_drude(gold_drude_params: DrudeParams) -> DispersionModel:
    return DispersionModel.drude_model(gold_drude_params, label="drude-gold")


@pytest.fixture()
def tight_quadrature() -> QuadratureConfig:
    return QuadratureConfig(rel_tol=1e-11)


@pytest.fixture()
def fixtures_dir() -> Path:
    return FIXTURES
