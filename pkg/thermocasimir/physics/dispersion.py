"""Permittivity models on the imaginary frequency axis and Drude relaxation nu(T).

All frequencies are in eV. Functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from thermocasimir.core.errors import DomainError
from thermocasimir.core.types import (
    DispersionModel,
    DrudeParams,
    ModelKind,
    PlasmaParams,
    RelaxationParams,
)

logger = logging.getLogger(__name__)

BG_REL_TOL = 1e-9


def _positive(name: str, value: ArrayLike) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} must be > 0, got {value!r}")
    return arr


def _as_output(arr: np.ndarray, like: ArrayLike) -> float | np.ndarray:
    return float(arr) if np.ndim(like) == 0 else arr


def eps_drude(zeta: ArrayLike, params: DrudeParams) -> float | np.ndarray:
    """1 + omega_p^2 / (zeta (zeta + nu))."""
    z = _positive("zeta", zeta)
    return _as_output(1.0 + params.omega_p**2 / (z * (z + params.nu)), zeta)


def eps_plasma(zeta: ArrayLike, params: PlasmaParams) -> float | np.ndarray:
    z = _positive("zeta", zeta)
    return _as_output(1.0 + (params.omega_p / z) ** 2, zeta)


def drude_real_frequency(omega: ArrayLike, params: DrudeParams) -> complex | np.ndarray:
    """Complex Drude permittivity 1 - omega_p^2 / (omega (omega + i nu)) at real omega."""
    w = _positive("omega", omega)
    value = 1.0 - params.omega_p**2 / (w * (w + 1j * params.nu))
    return complex(value) if np.ndim(omega) == 0 else value


def _bg_integrand(x: float) -> float:
    if x == 0.0:
        return 0.0
    return x**5 * math.exp(-x) / math.expm1(-x) ** 2


def bloch_gruneisen_integral(upper: float) -> float:
    """Integral of x^5 e^x / (e^x - 1)^2 from 0 to upper."""
    if upper <= 0:
        raise DomainError(f"upper limit must be > 0, got {upper}")
    value, error = integrate.quad(_bg_integrand, 0.0, upper, epsabs=0.0, epsrel=BG_REL_TOL, limit=200)
    logger.debug("bloch-gruneisen integral to %.6g = %.12g (err %.2g)", upper, value, error)
    return value


def resistivity_bloch_gruneisen(t_kelvin: float, params: RelaxationParams) -> float:
    """rho(T) = C (T/Theta)^5 J(Theta/T) in Ohm m."""
    if not t_kelvin > 0:
        raise DomainError(f"temperature must be > 0 K, got {t_kelvin}")
    ratio = t_kelvin / params.theta
    return params.c_bg * ratio**5 * bloch_gruneisen_integral(1.0 / ratio)


def relaxation_from_resistivity(rho: float, k_conv: float) -> float:
    return k_conv * rho


def nu_bloch_gruneisen(t_kelvin: float, params: RelaxationParams) -> float:
    """Temperature dependent relaxation frequency nu = K rho(T) (eV)."""
    rho = resistivity_bloch_gruneisen(t_kelvin, params)
    return relaxation_from_resistivity(rho, params.k_conv) + params.residual_nu


def calibrate_relaxation(
    *,
    t_ref: float,
    rho_ref: float,
    nu_ref: float,
    theta: float,
) -> RelaxationParams:
    """Recover C and K from one measured (T, rho, nu) point."""
    if t_ref <= 0 or rho_ref <= 0 or nu_ref <= 0 or theta <= 0:
        raise DomainError("calibration inputs must all be > 0")
    ratio = t_ref / theta
    c_bg = rho_ref / (ratio**5 * bloch_gruneisen_integral(1.0 / ratio))
    return RelaxationParams(theta=theta, c_bg=c_bg, k_conv=nu_ref / rho_ref)


def drude_params_at(model: DispersionModel, t_kelvin: float) -> DrudeParams:
    """Drude parameters with nu(T) substituted when relaxation constants are present."""
    assert model.drude is not None
    if model.relaxation is None:
        return model.drude
    return DrudeParams(omega_p=model.drude.omega_p, nu=nu_bloch_gruneisen(t_kelvin, model.relaxation))


def eval_model(model: DispersionModel, zeta: ArrayLike, t_kelvin: float) -> float | np.ndarray:
    """eps(i zeta) for any model; the ideal metal returns +inf."""
    if model.kind == ModelKind.IDEAL:
        return _as_output(np.full(np.shape(zeta), math.inf), zeta)

    z = _positive("zeta", zeta)
    if model.kind == ModelKind.CONSTANT:
        assert model.eps0 is not None
        return _as_output(np.full(z.shape, model.eps0), zeta)
    if model.kind == ModelKind.DRUDE:
        return eps_drude(zeta, drude_params_at(model, t_kelvin))
    if model.kind == ModelKind.PLASMA:
        assert model.plasma is not None
        return eps_plasma(zeta, model.plasma)

    # Tabulated data carries no temperature dependence.
    from thermocasimir.physics.optical_data import interpolate

    assert model.table is not None
    return interpolate(model.table, zeta)
