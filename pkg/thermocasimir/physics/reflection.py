"""Reflection coefficients, their zero-mode limits and the TE slab Green's function.

Coefficient math is done in the Lifshitz variable p = q/zeta with
s = sqrt(eps - 1 + p^2); differences such as s - p are evaluated as
(eps - 1)/(s + p) so that nearly transparent media keep full precision.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from thermocasimir.core import units
from thermocasimir.core.errors import DomainError, SingularConfigurationError
from thermocasimir.core.types import (
    DispersionModel,
    LifshitzVariables,
    ModelKind,
    QuadratureConfig,
    ReflectionPair,
    SlabProfile,
)
from thermocasimir.physics.dispersion import eval_model
from thermocasimir.physics.matsubara import TruncationMonitor

logger = logging.getLogger(__name__)


def lifshitz_variables(eps: float, p: float) -> LifshitzVariables:
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    s = math.inf if math.isinf(eps) else math.sqrt(eps - 1.0 + p * p)
    return LifshitzVariables(p=p, s=s, eps=eps)


def squared_coefficients(eps: ArrayLike, p: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (A, B); eps = +inf is the ideal metal and gives (1, 1)."""
    e = np.asarray(eps, dtype=float)
    pp = np.asarray(p, dtype=float)
    e, pp = np.broadcast_arrays(e, pp)
    if np.any(pp < 1.0):
        raise DomainError("p must be >= 1")

    ideal = np.isinf(e)
    ef = np.where(ideal, 2.0, e)
    excess = ef - 1.0
    s = np.sqrt(excess + pp * pp)
    tm = excess * ((ef + 1.0) * pp * pp - 1.0) / (ef * pp + s) ** 2
    te = excess / (s + pp) ** 2
    a_coeff = np.where(ideal, 1.0, tm * tm)
    b_coeff = np.where(ideal, 1.0, te * te)
    return a_coeff, b_coeff


def coefficients(eps: float, p: float) -> ReflectionPair:
    if eps < 1.0:
        raise DomainError(f"eps must be >= 1, got {eps}")
    variables = lifshitz_variables(eps, p)
    a_coeff, b_coeff = squared_coefficients(variables.eps, variables.p)
    return ReflectionPair(a_coeff=min(float(a_coeff), 1.0), b_coeff=min(float(b_coeff), 1.0))


def plasma_zero_mode_b(y: ArrayLike, omega_p_ev: float, a_um: float) -> np.ndarray:
    """((y - sqrt(y^2 + w^2)) / (y + sqrt(y^2 + w^2)))^2 with w = omega_p a."""
    yy = np.asarray(y, dtype=float)
    w = units.ev_to_inverse_um(omega_p_ev) * a_um
    root = np.sqrt(yy * yy + w * w)
    ratio = (w * w) / (yy + root) ** 2
    return ratio * ratio


def zero_mode_arrays(model: DispersionModel, y: ArrayLike, a_um: float) -> tuple[np.ndarray, np.ndarray]:
    yy = np.asarray(y, dtype=float)
    ones = np.ones_like(yy)
    if model.kind == ModelKind.IDEAL:
        return ones, ones if model.sdm else np.zeros_like(yy)
    if model.kind == ModelKind.CONSTANT:
        assert model.eps0 is not None
        r = (model.eps0 - 1.0) / (model.eps0 + 1.0)
        return ones * r * r, np.zeros_like(yy)
    if model.kind == ModelKind.PLASMA:
        assert model.plasma is not None
        return ones, plasma_zero_mode_b(yy, model.plasma.omega_p, a_um)
    # Drude, and tables whose low-frequency extrapolation diverges like 1/zeta.
    return ones, np.zeros_like(yy)


def zero_mode(model: DispersionModel, y: float, a_um: float) -> ReflectionPair:
    if not y > 0:
        raise DomainError(f"y must be > 0, got {y}")
    a_coeff, b_coeff = zero_mode_arrays(model, y, a_um)
    return ReflectionPair(a_coeff=float(a_coeff), b_coeff=float(b_coeff))


def r2_asymptote(omega_p: float, nu: float, k_perp: float, zeta: float) -> float:
    """Small-zeta Drude TE coefficient (omega_p^2 / 4 k^2)^2 (zeta/nu)^2, all in eV."""
    if k_perp == 0:
        raise DomainError("k_perp = 0 is a measure-zero point with no asymptote")
    if omega_p <= 0 or nu <= 0 or zeta <= 0 or k_perp < 0:
        raise DomainError("omega_p, nu, k_perp and zeta must be positive")
    return (omega_p**2 / (4.0 * k_perp**2)) ** 2 * (zeta / nu) ** 2


def fresnel(eps: float, k_perp: float, zeta: float) -> tuple[float, float]:
    """(TM, TE) amplitudes (s - eps p)/(s + eps p) and (s - p)/(s + p)."""
    if eps < 1.0 or math.isinf(eps):
        raise DomainError(f"eps must be finite and >= 1, got {eps}")
    if zeta <= 0:
        raise DomainError(f"zeta must be > 0, got {zeta}")
    p = math.sqrt(1.0 + (k_perp / zeta) ** 2)
    s = math.sqrt(eps - 1.0 + p * p)
    excess = eps - 1.0
    tm = -excess * ((eps + 1.0) * p * p - 1.0) / (eps * p + s) ** 2
    te = excess / (s + p) ** 2
    return tm, te


# -- TE Green's function of a three-region slab ---------------------------------


def _region_eps(region: float | DispersionModel, zeta_ev: float, t_kelvin: float) -> float:
    if isinstance(region, DispersionModel):
        return float(eval_model(region, zeta_ev, t_kelvin))
    return float(region)


def _zero_frequency_sq_eps(region: float | DispersionModel) -> float:
    """lim zeta -> 0 of zeta^2 eps(i zeta), in units of 1/um^2."""
    if isinstance(region, DispersionModel) and region.kind == ModelKind.PLASMA:
        assert region.plasma is not None
        return units.ev_to_inverse_um(region.plasma.omega_p) ** 2
    return 0.0


def _interface_ratios(
    profile: SlabProfile,
    kappa3: float,
    zeta_ev: float,
    t_kelvin: float,
) -> tuple[float, float]:
    """(kappa3 - kappa_i)/(kappa3 + kappa_i) for the left and right walls."""
    if zeta_ev == 0.0:
        sq3 = _zero_frequency_sq_eps(profile.eps3)
        sq = (_zero_frequency_sq_eps(profile.eps1), _zero_frequency_sq_eps(profile.eps2))
    else:
        zeta = units.ev_to_inverse_um(zeta_ev)
        sq3 = zeta * zeta * _region_eps(profile.eps3, zeta_ev, t_kelvin)
        sq = (
            zeta * zeta * _region_eps(profile.eps1, zeta_ev, t_kelvin),
            zeta * zeta * _region_eps(profile.eps2, zeta_ev, t_kelvin),
        )

    ratios: list[float] = []
    for index, sq_i in zip((1, 2), sq):
        excess = sq3 - sq_i
        if excess == 0.0:
            if zeta_ev > 0.0:
                raise SingularConfigurationError(f"kappa3 equals kappa{index}: regions 3 and {index} are degenerate")
            ratios.append(0.0)
            continue
        kappa_i = math.sqrt(kappa3 * kappa3 - sq3 + sq_i)
        ratios.append(excess / (kappa3 + kappa_i) ** 2)
    return ratios[0], ratios[1]


def greens_te_interior(
    profile: SlabProfile,
    k: float,
    zeta: float,
    z: float,
    z_prime: float,
    *,
    t_kelvin: float = 300.0,
) -> float:
    """Reduced TE Green's function for 0 < z, z' < a.

    k is the transverse wave number (1/um), zeta the imaginary frequency (eV),
    positions in um. zeta = 0 takes the static limit of each region.
    """
    a = profile.a_um
    if not (0.0 < z < a and 0.0 < z_prime < a):
        raise DomainError(f"z and z' must lie inside the gap (0, {a})")
    if k <= 0 or zeta < 0:
        raise DomainError("k must be > 0 and zeta >= 0")

    if zeta == 0.0:
        kappa3 = math.sqrt(k * k + _zero_frequency_sq_eps(profile.eps3))
    else:
        zeta_um = units.ev_to_inverse_um(zeta)
        kappa3 = math.sqrt(k * k + zeta_um * zeta_um * _region_eps(profile.eps3, zeta, t_kelvin))
    rho1, rho2 = _interface_ratios(profile, kappa3, zeta, t_kelvin)

    delta = z - z_prime
    total = z + z_prime
    round_trip = math.exp(-2.0 * kappa3 * a)
    denominator = 1.0 - rho1 * rho2 * round_trip
    d_inverse = rho1 * rho2 * round_trip / denominator

    value = (
        math.exp(-kappa3 * abs(delta))
        + rho1 * math.exp(-kappa3 * total)
        + rho1 * rho2 * (math.exp(kappa3 * (delta - 2.0 * a)) + math.exp(kappa3 * (-delta - 2.0 * a))) / denominator
        + rho2 * math.exp(kappa3 * (total - 2.0 * a)) / denominator
        + d_inverse * rho1 * math.exp(-kappa3 * total)
    )
    return value / (2.0 * kappa3)


def free_greens(k: float, z: float, z_prime: float) -> float:
    return math.exp(-k * abs(z - z_prime)) / (2.0 * k)


def te_pressure_from_greens(
    profile: SlabProfile,
    t_kelvin: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """TE pressure (mPa) from the 2 kappa3 d^-1 term, contact term dropped."""
    cfg = cfg or QuadratureConfig()
    if t_kelvin <= 0:
        raise DomainError(f"temperature must be > 0 K, got {t_kelvin}")

    a = profile.a_um
    gamma = units.gamma(a, t_kelvin)

    def term(m: int) -> float:
        zeta_ev = units.matsubara_ev(m, t_kelvin)
        if m == 0:
            lower = math.sqrt(_zero_frequency_sq_eps(profile.eps3)) * a
        else:
            lower = m * gamma * math.sqrt(_region_eps(profile.eps3, zeta_ev, t_kelvin))
        if lower >= cfg.y_max:
            return 0.0

        def integrand(y: float) -> float:
            kappa3 = y / a
            rho1, rho2 = _interface_ratios(profile, kappa3, zeta_ev, t_kelvin)
            product = rho1 * rho2 * math.exp(-2.0 * y)
            return y * y * product / (1.0 - product)

        value, _ = integrate.quad(integrand, lower, cfg.y_max, epsabs=0.0, epsrel=cfg.rel_tol, limit=200)
        return value

    monitor = TruncationMonitor(rel_tol=cfg.rel_tol)
    terms = [0.5 * term(0)]
    partial = terms[0]
    m = 0
    while m < cfg.m_max:
        m += 1
        value = term(m)
        terms.append(value)
        partial += value
        if monitor.update(value, partial):
            break
    else:
        logger.warning("TE Green's function sum hit m_max=%d without converging", cfg.m_max)

    pressure_natural = -units.kelvin_to_inverse_um(t_kelvin) * math.fsum(terms) / (math.pi * a**3)
    return units.natural_pressure_to_mpa(pressure_natural)
