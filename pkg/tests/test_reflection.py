from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermocasimir.core import units
from thermocasimir.core.errors import DomainError, SingularConfigurationError
from thermocasimir.core.types import (
    DispersionModel,
    DrudeParams,
    PlasmaParams,
    PlateGeometry,
    SlabProfile,
)
from thermocasimir.physics.dispersion import eps_drude
from thermocasimir.physics.lifshitz import mode_breakdown
from thermocasimir.physics.reflection import (
    coefficients,
    free_greens,
    fresnel,
    greens_te_interior,
    lifshitz_variables,
    plasma_zero_mode_b,
    r2_asymptote,
    squared_coefficients,
    te_pressure_from_greens,
    zero_mode,
)

permittivities = st.floats(min_value=1.0, max_value=1e6, allow_nan=False)
lifshitz_p = st.floats(min_value=1.0, max_value=1e3, allow_nan=False)


# -- squared coefficients ------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(eps=permittivities, p=lifshitz_p)
def test_coefficients_stay_in_unit_interval(eps: float, p: float) -> None:
    pair = coefficients(eps, p)
    assert 0.0 <= pair.a_coeff <= 1.0
    assert 0.0 <= pair.b_coeff <= 1.0
    assert pair.b_coeff <= pair.a_coeff * (1.0 + 1e-12) + 1e-300


@settings(max_examples=100, deadline=None)
@given(eps=st.floats(min_value=1.0, max_value=1e5), factor=st.floats(min_value=1.01, max_value=10.0), p=lifshitz_p)
def test_coefficients_grow_with_permittivity(eps: float, factor: float, p: float) -> None:
    low = coefficients(eps, p)
    high = coefficients(eps * factor, p)
    assert high.a_coeff >= low.a_coeff
    assert high.b_coeff >= low.b_coeff


def test_vacuum_does_not_reflect() -> None:
    pair = coefficients(1.0, 2.5)
    assert pair.a_coeff == 0.0
    assert pair.b_coeff == 0.0


def test_ideal_metal_reflects_fully() -> None:
    a_coeff, b_coeff = squared_coefficients([math.inf, math.inf], [1.0, 7.0])
    assert list(a_coeff) == [1.0, 1.0]
    assert list(b_coeff) == [1.0, 1.0]


def test_modes_coincide_at_normal_incidence() -> None:
    pair = coefficients(100.0, 1.0)
    assert pair.a_coeff == pytest.approx(81.0 / 121.0, rel=1e-12)
    assert pair.b_coeff == pytest.approx(81.0 / 121.0, rel=1e-12)


def test_weak_dielectric_keeps_precision() -> None:
    pair = coefficients(1.0 + 1e-10, 1.0)
    # r = (sqrt(eps) - 1)/(sqrt(eps) + 1) ~ delta / 4
    assert pair.b_coeff == pytest.approx((0.25e-10) ** 2, rel=1e-6)


@pytest.mark.parametrize(("eps", "p"), [(0.5, 1.0), (10.0, 0.99)])
def test_coefficients_reject_out_of_domain(eps: float, p: float) -> None:
    with pytest.raises(DomainError):
        coefficients(eps, p)


def test_lifshitz_variables() -> None:
    variables = lifshitz_variables(5.0, 2.0)
    assert variables.s == pytest.approx(math.sqrt(8.0))
    assert math.isinf(lifshitz_variables(math.inf, 2.0).s)


# -- zero modes ------------------------------------------------------------------------


def test_zero_mode_per_model(gold_drude: DispersionModel) -> None:
    assert zero_mode(DispersionModel.ideal(), 1.0, 1.0).model_dump() == {"a_coeff": 1.0, "b_coeff": 1.0}
    assert zero_mode(DispersionModel.ideal(sdm=False), 1.0, 1.0).b_coeff == 0.0
    assert zero_mode(DispersionModel.constant(3.0), 1.0, 1.0).model_dump() == {"a_coeff": 0.25, "b_coeff": 0.0}
    assert zero_mode(gold_drude, 1.0, 1.0).model_dump() == {"a_coeff": 1.0, "b_coeff": 0.0}


def test_plasma_zero_mode_te_between_limits() -> None:
    model = DispersionModel.plasma_model(PlasmaParams(omega_p=9.0))
    pair = zero_mode(model, 1.0, a_um=1.0)
    assert pair.a_coeff == 1.0
    assert 0.9 < pair.b_coeff < 1.0
    w = units.ev_to_inverse_um(9.0) * 1.0
    assert float(plasma_zero_mode_b(1e-6, 9.0, 1.0)) == pytest.approx(1.0 - 4e-6 / w, rel=1e-12)
    assert float(plasma_zero_mode_b(1e4, 9.0, 1.0)) < 1e-6


def test_zero_mode_needs_positive_y() -> None:
    with pytest.raises(DomainError):
        zero_mode(DispersionModel.ideal(), 0.0, 1.0)


# -- amplitudes and asymptotes ---------------------------------------------------------


def test_fresnel_signs_at_normal_incidence() -> None:
    tm, te = fresnel(100.0, 0.0, 1.0)
    assert tm == pytest.approx(-9.0 / 11.0, rel=1e-12)
    assert te == pytest.approx(9.0 / 11.0, rel=1e-12)


def test_fresnel_rejects_bad_arguments() -> None:
    with pytest.raises(DomainError):
        fresnel(math.inf, 1.0, 1.0)
    with pytest.raises(DomainError):
        fresnel(10.0, 1.0, 0.0)


def test_drude_te_asymptote(gold_drude_params: DrudeParams) -> None:
    zeta = 1e-8
    _, te = fresnel(float(eps_drude(zeta, gold_drude_params)), 1.0, zeta)
    assert te**2 == pytest.approx(r2_asymptote(9.0, 0.035, 1.0, zeta), rel=1e-3)


def test_asymptote_undefined_at_normal_incidence() -> None:
    with pytest.raises(DomainError):
        r2_asymptote(9.0, 0.035, 0.0, 1e-6)


# -- slab Green's function ---------------------------------------------------------------


def test_greens_function_without_interfaces_is_free() -> None:
    profile = SlabProfile(eps1=4.0, eps2=9.0, eps3=1.0, a_um=1.0)
    assert greens_te_interior(profile, 2.0, 0.0, 0.3, 0.6) == pytest.approx(free_greens(2.0, 0.3, 0.6), rel=1e-14)


def test_greens_function_far_from_walls_is_free() -> None:
    profile = SlabProfile(eps1=10.0, eps2=10.0, a_um=100.0)
    kappa3 = math.sqrt(1.0 + units.ev_to_inverse_um(0.1) ** 2)
    expected = free_greens(kappa3, 50.0, 50.5)
    assert greens_te_interior(profile, 1.0, 0.1, 50.0, 50.5) == pytest.approx(expected, rel=1e-12)


def test_greens_function_is_symmetric() -> None:
    profile = SlabProfile(eps1=DispersionModel.constant(20.0), eps2=5.0, a_um=1.0)
    forward = greens_te_interior(profile, 1.5, 0.2, 0.2, 0.7)
    backward = greens_te_interior(profile, 1.5, 0.2, 0.7, 0.2)
    assert forward == pytest.approx(backward, rel=1e-13)


def test_greens_function_matches_closed_form() -> None:
    a, k, z, zp = 1.0, 1.0, 0.25, 0.5
    profile = SlabProfile(eps1=10.0, eps2=10.0, a_um=a)
    zeta_um = units.ev_to_inverse_um(0.4)
    kappa3 = math.sqrt(k * k + zeta_um**2)
    kappa = math.sqrt(k * k + 10.0 * zeta_um**2)
    r = (kappa3 - kappa) / (kappa3 + kappa)
    bounce = r * r * math.exp(-2.0 * kappa3 * a)
    expected = (
        math.exp(-kappa3 * abs(z - zp))
        + (
            r * math.exp(-kappa3 * (z + zp))
            + r * math.exp(-kappa3 * (2.0 * a - z - zp))
            + 2.0 * bounce * math.cosh(kappa3 * (z - zp))
        )
        / (1.0 - bounce)
    ) / (2.0 * kappa3)
    assert greens_te_interior(profile, k, 0.4, z, zp) == pytest.approx(expected, rel=1e-6)


def test_degenerate_regions_are_singular() -> None:
    profile = SlabProfile(eps1=1.0, eps2=4.0, eps3=1.0, a_um=1.0)
    with pytest.raises(SingularConfigurationError):
        greens_te_interior(profile, 1.0, 0.1, 0.3, 0.6)


def test_greens_function_points_must_lie_in_gap() -> None:
    profile = SlabProfile(eps1=4.0, eps2=4.0, a_um=1.0)
    with pytest.raises(DomainError):
        greens_te_interior(profile, 1.0, 0.1, 1.2, 0.5)


def test_ideal_metal_regions_rejected() -> None:
    with pytest.raises(ValueError):
        SlabProfile(eps1=DispersionModel.ideal(), eps2=4.0, a_um=1.0)


@pytest.mark.parametrize(
    "model",
    [
        DispersionModel.constant(10.0),
        DispersionModel.plasma_model(PlasmaParams(omega_p=9.0)),
    ],
    ids=["constant", "plasma"],
)
def test_greens_pressure_matches_engine_te_part(model: DispersionModel, tight_quadrature) -> None:
    geom = PlateGeometry(a_um=1.0, t_kelvin=300.0)
    profile = SlabProfile(eps1=model, eps2=model, eps3=1.0, a_um=1.0)
    from_greens = te_pressure_from_greens(profile, 300.0, tight_quadrature)
    breakdown = mode_breakdown(model, geom, tight_quadrature)
    assert from_greens < 0
    assert from_greens == pytest.approx(breakdown.te_pressure, rel=1e-6)
