from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from thermocasimir.core.errors import DomainError, InstabilityError
from thermocasimir.core.types import CouplingKind, OscillatorSystem
from thermocasimir.physics.oscillator import (
    classical_induced_free_energy,
    d_factor,
    direct_determinant,
    induced_entropy,
    induced_free_energy,
    normal_mode_eigenvalues,
    q_determinant,
)

COORDINATE = OscillatorSystem(a1=1.0, a2=1.0, a3=2.0, c=0.5)
MOMENTUM = COORDINATE.model_copy(update={"kind": CouplingKind.MOMENTUM})

frequencies = st.floats(min_value=0.1, max_value=10.0)


@st.composite
def stable_systems(draw) -> OscillatorSystem:
    a1, a2, a3 = draw(frequencies), draw(frequencies), draw(frequencies)
    kind = draw(st.sampled_from(list(CouplingKind)))
    # stay at least a factor 1.5 away from the coordinate-coupling edge
    c_limit = math.sqrt(a1 * a2 * a3 / (1.5 * (a1 + a2)))
    c = draw(st.floats(min_value=-c_limit, max_value=c_limit))
    return OscillatorSystem(a1=a1, a2=a2, a3=a3, c=c, kind=kind)


# -- determinant ------------------------------------------------------------------------


@settings(max_examples=1000, deadline=None)
@given(system=stable_systems(), zeta=st.floats(min_value=0.0, max_value=20.0))
def test_factored_determinant_matches_direct(system: OscillatorSystem, zeta: float) -> None:
    assert q_determinant(system, zeta) == pytest.approx(direct_determinant(system, zeta), rel=1e-12)


def test_uncoupled_determinant() -> None:
    system = OscillatorSystem(a1=1.0, a2=2.0, a3=3.0, c=0.0)
    assert q_determinant(system, 0.5) == pytest.approx(1.25 * 2.25 * 3.25)


def test_unstable_coupling_rejected() -> None:
    with pytest.raises(ValidationError):
        OscillatorSystem(a1=1.0, a2=1.0, a3=0.4, c=0.5)
    unchecked = OscillatorSystem.model_construct(a1=1.0, a2=1.0, a3=0.4, c=0.5, kind=CouplingKind.COORDINATE)
    with pytest.raises(InstabilityError):
        q_determinant(unchecked, 0.0)


def test_eigenvalues_reproduce_static_determinant() -> None:
    assert np.prod(normal_mode_eigenvalues(COORDINATE)) == pytest.approx(q_determinant(COORDINATE, 0.0), rel=1e-10)
    assert np.prod(normal_mode_eigenvalues(COORDINATE)) == pytest.approx(1.5, rel=1e-12)
    # the coupling drops out of the classical momentum problem
    assert np.prod(normal_mode_eigenvalues(MOMENTUM)) == pytest.approx(2.0, rel=1e-12)


# -- d factors ----------------------------------------------------------------------------


def test_d_factors() -> None:
    assert d_factor(COORDINATE, 1, 0.0) == pytest.approx(0.125)
    assert d_factor(MOMENTUM, 2, 0.0) == 0.0
    for zeta in (0.1, 1.0, 10.0):
        assert d_factor(MOMENTUM, 1, zeta) < 0.0
    ratio = d_factor(COORDINATE, 1, 200.0) / d_factor(COORDINATE, 1, 100.0)
    assert ratio == pytest.approx(1 / 16, rel=1e-3)
    with pytest.raises(DomainError):
        d_factor(COORDINATE, 3, 1.0)


# -- induced thermodynamics -----------------------------------------------------------------


def test_classical_limits() -> None:
    assert classical_induced_free_energy(MOMENTUM, 3.0) == 0.0
    value = classical_induced_free_energy(COORDINATE, 2.0)
    assert value < 0.0
    assert classical_induced_free_energy(COORDINATE, 4.0) == pytest.approx(2.0 * value, rel=1e-14)


def test_high_temperature_reaches_classical_limits() -> None:
    coordinate = induced_free_energy(COORDINATE, 10.0)
    assert coordinate.converged
    assert coordinate.free_energy == pytest.approx(classical_induced_free_energy(COORDINATE, 10.0), rel=1e-6)
    assert abs(induced_free_energy(MOMENTUM, 10.0).free_energy) < 1e-6


def test_uncoupled_system_has_no_induced_energy() -> None:
    system = OscillatorSystem(a1=1.0, a2=1.0, a3=2.0, c=0.0)
    assert induced_free_energy(system, 0.3).free_energy == 0.0


@pytest.mark.parametrize("system", [COORDINATE, MOMENTUM], ids=["coordinate", "momentum"])
@pytest.mark.parametrize("temperature", [0.02, 0.1, 0.5, 2.0])
def test_induced_free_energy_is_never_positive(system: OscillatorSystem, temperature: float) -> None:
    assert induced_free_energy(system, temperature).free_energy <= 0.0


def test_momentum_free_energy_rises_with_temperature() -> None:
    cold = induced_free_energy(MOMENTUM, 0.1).free_energy
    warm = induced_free_energy(MOMENTUM, 1.0).free_energy
    assert warm > cold


def test_momentum_entropy_goes_negative() -> None:
    values = [induced_entropy(MOMENTUM, t).entropy for t in (0.5, 1.0, 2.0)]
    assert all(value is not None and value < 0.0 for value in values)


def test_coordinate_entropy_is_classical_when_hot() -> None:
    result = induced_entropy(COORDINATE, 10.0)
    assert result.entropy == pytest.approx(-classical_induced_free_energy(COORDINATE, 1.0), rel=1e-5)


@pytest.mark.parametrize("system", [COORDINATE, MOMENTUM], ids=["coordinate", "momentum"])
def test_entropy_vanishes_when_cold(system: OscillatorSystem) -> None:
    result = induced_entropy(system, 0.02)
    assert result.entropy == pytest.approx(0.0, abs=1e-6)


def test_temperature_must_be_positive() -> None:
    with pytest.raises(DomainError):
        induced_free_energy(COORDINATE, 0.0)
