"""Matsubara-sum engine for the Lifshitz pressure and free energy.

Integrals run over y = q a from m*gamma to y_max, with p = y/(m gamma).
The m = 0 term uses the zero-mode coefficients and carries half weight.
Terms m >= 1 are integrated a block at a time with ``quad_vec``, each
interval mapped onto [0, 1] so one vector-valued integrand covers the block.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from thermocasimir.core import units
from thermocasimir.core.errors import DomainError
from thermocasimir.core.types import (
    CoefficientSample,
    DifferentiationConfig,
    DispersionModel,
    ModeBreakdown,
    ModeShare,
    PlateGeometry,
    QuadratureConfig,
    ThermoResult,
)
from thermocasimir.physics.dispersion import eval_model
from thermocasimir.physics.ideal_metal import mim_pressure_lowT
from thermocasimir.physics.matsubara import TruncationMonitor, derivative_step, richardson_derivative
from thermocasimir.physics.reflection import squared_coefficients, zero_mode_arrays

logger = logging.getLogger(__name__)

BLOCK_SIZE = 64
SAMPLE_POINTS = (1.0, 3.0)
SAMPLE_MODES = 6

Kernel = Callable[[np.ndarray, np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]


def _one_minus(coeff: np.ndarray, y: np.ndarray) -> np.ndarray:
    # 1 - C e^{-2y} without cancellation when C is close to 1
    return (1.0 - coeff) + coeff * -np.expm1(-2.0 * y)


def _pressure_kernel(a_coeff: np.ndarray, b_coeff: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.exp(-2.0 * y)
    y2 = y * y
    return y2 * a_coeff * e / _one_minus(a_coeff, y), y2 * b_coeff * e / _one_minus(b_coeff, y)


def _free_energy_kernel(a_coeff: np.ndarray, b_coeff: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return y * np.log(_one_minus(a_coeff, y)), y * np.log(_one_minus(b_coeff, y))


@dataclass(slots=True)
class _ModeSums:
    """Weighted per-mode integrals, m = 0 first; dimensionless."""

    tm: list[float] = field(default_factory=list)
    te: list[float] = field(default_factory=list)
    converged: bool = True

    @property
    def terms_used(self) -> int:
        return len(self.tm)

    def total(self) -> float:
        return math.fsum(self.tm) + math.fsum(self.te)


def _label(model: DispersionModel) -> str:
    return model.label or model.kind.value


def _check_geometry(geom: PlateGeometry) -> None:
    if not (geom.a_um > 0 and geom.t_kelvin > 0):
        raise DomainError("gap and temperature must be positive")


def _zero_term(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig, kernel: Kernel) -> tuple[float, float]:
    def part(index: int) -> Callable[[float], float]:
        def integrand(y: float) -> float:
            yy = np.asarray(y, dtype=float)
            a_coeff, b_coeff = zero_mode_arrays(model, yy, geom.a_um)
            return float(kernel(a_coeff, b_coeff, yy)[index])

        return integrand

    values = []
    for index in (0, 1):
        value, _ = integrate.quad(part(index), 0.0, cfg.y_max, epsabs=0.0, epsrel=cfg.rel_tol, limit=200)
        values.append(0.5 * value)
    return values[0], values[1]


def _block_terms(
    model: DispersionModel,
    geom: PlateGeometry,
    cfg: QuadratureConfig,
    kernel: Kernel,
    modes: np.ndarray,
    scale: float,
) -> tuple[np.ndarray, np.ndarray, bool]:
    gamma = geom.gamma
    tm = np.zeros(modes.size)
    te = np.zeros(modes.size)
    lowers = modes * gamma
    active = lowers < cfg.y_max
    if not np.any(active):
        return tm, te, True

    ms = modes[active]
    start = lowers[active]
    width = cfg.y_max - start
    eps = np.asarray(eval_model(model, units.matsubara_ev(1, geom.t_kelvin) * ms, geom.t_kelvin), dtype=float)
    count = ms.size

    def integrand(u: float) -> np.ndarray:
        y = start + width * u
        a_coeff, b_coeff = squared_coefficients(eps, y / start)
        tm_part, te_part = kernel(a_coeff, b_coeff, y)
        return np.concatenate((tm_part * width, te_part * width))

    result, _, info = integrate.quad_vec(
        integrand,
        0.0,
        1.0,
        epsabs=max(0.1 * cfg.rel_tol * scale, 1e-200),
        epsrel=cfg.rel_tol,
        norm="max",
        full_output=True,
    )
    tm[active] = result[:count]
    te[active] = result[count:]
    return tm, te, info.status == 0


def _matsubara_sums(
    model: DispersionModel,
    geom: PlateGeometry,
    cfg: QuadratureConfig,
    kernel: Kernel,
) -> _ModeSums:
    _check_geometry(geom)
    sums = _ModeSums()
    tm0, te0 = _zero_term(model, geom, cfg, kernel)
    sums.tm.append(tm0)
    sums.te.append(te0)
    partial = tm0 + te0

    monitor = TruncationMonitor(rel_tol=cfg.rel_tol)
    quad_ok = True
    first = 1
    while first <= cfg.m_max:
        last = min(first + BLOCK_SIZE - 1, cfg.m_max)
        modes = np.arange(first, last + 1, dtype=float)
        tm, te, ok = _block_terms(model, geom, cfg, kernel, modes, abs(partial))
        quad_ok = quad_ok and ok
        for tm_m, te_m in zip(tm, te):
            sums.tm.append(float(tm_m))
            sums.te.append(float(te_m))
            term = float(tm_m + te_m)
            partial += term
            if monitor.update(term, partial):
                sums.converged = quad_ok
                return sums
        first = last + 1

    sums.converged = False
    logger.warning(
        "%s a=%g um T=%g K: Matsubara sum not converged after m_max=%d",
        _label(model),
        geom.a_um,
        geom.t_kelvin,
        cfg.m_max,
    )
    return sums


def _pressure_prefactor(geom: PlateGeometry) -> float:
    return -geom.t_inv_um / (math.pi * geom.a_um**3)


def _free_energy_prefactor(geom: PlateGeometry) -> float:
    return geom.t_inv_um / (2.0 * math.pi * geom.a_um**2)


def truncation_bound(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig | None = None) -> float:
    """Upper bound (mPa) on the pressure lost by cutting every integral at y_max."""
    cfg = cfg or QuadratureConfig()
    gamma = geom.gamma
    last = math.ceil((cfg.y_max + 40.0) / gamma) + 1
    modes = np.arange(0, last + 1, dtype=float)
    upper = np.maximum(cfg.y_max, modes * gamma)

    envelope = np.ones(modes.size)
    if not model.is_ideal:
        eps = np.asarray(eval_model(model, units.matsubara_ev(1, geom.t_kelvin) * modes[1:], geom.t_kelvin), dtype=float)
        envelope[1:] = np.minimum(((eps - 1.0) / (eps + 1.0)) ** 2, 1.0)
    weights = np.where(modes == 0, 0.5, 1.0)

    e = np.exp(-2.0 * upper)
    tail = 2.0 * envelope * e * (upper**2 / 2.0 + upper / 2.0 + 0.25) / -np.expm1(-2.0 * upper)
    return abs(units.natural_pressure_to_mpa(_pressure_prefactor(geom) * math.fsum(weights * tail)))


# -- public operations -------------------------------------------------------------------


def pressure(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig | None = None) -> ThermoResult:
    """Casimir pressure in mPa; negative means attraction."""
    cfg = cfg or QuadratureConfig()
    sums = _matsubara_sums(model, geom, cfg, _pressure_kernel)
    value = units.natural_pressure_to_mpa(_pressure_prefactor(geom) * sums.total())
    logger.debug("%s pressure a=%g T=%g: %d terms", _label(model), geom.a_um, geom.t_kelvin, sums.terms_used)
    return ThermoResult(
        model=_label(model),
        a_um=geom.a_um,
        t_kelvin=geom.t_kelvin,
        pressure=value,
        terms_used=sums.terms_used,
        converged=sums.converged,
        truncation_bound=truncation_bound(model, geom, cfg),
    )


def free_energy(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig | None = None) -> ThermoResult:
    """Free energy per area in nJ/m^2."""
    cfg = cfg or QuadratureConfig()
    sums = _matsubara_sums(model, geom, cfg, _free_energy_kernel)
    value = units.natural_energy_to_nj_m2(_free_energy_prefactor(geom) * sums.total())
    logger.debug("%s free energy a=%g T=%g: %d terms", _label(model), geom.a_um, geom.t_kelvin, sums.terms_used)
    return ThermoResult(
        model=_label(model),
        a_um=geom.a_um,
        t_kelvin=geom.t_kelvin,
        free_energy=value,
        terms_used=sums.terms_used,
        converged=sums.converged,
    )


def _temperature_step(geom: PlateGeometry, diff: DifferentiationConfig) -> tuple[float, bool]:
    step = derivative_step(geom.t_kelvin, diff.rel_step, diff.t_floor)
    if geom.t_kelvin - step <= 0.0:
        logger.warning("temperature step %g K underflows T=%g K; halving T instead", step, geom.t_kelvin)
        return 0.5 * geom.t_kelvin, False
    return step, True


def entropy_internal(
    model: DispersionModel,
    geom: PlateGeometry,
    cfg: QuadratureConfig | None = None,
    diff: DifferentiationConfig | None = None,
) -> ThermoResult:
    """S = -dF/dT by Richardson-extrapolated central differences, then U = F + T S."""
    cfg = cfg or QuadratureConfig()
    diff = diff or DifferentiationConfig()
    step, step_ok = _temperature_step(geom, diff)

    flags: list[bool] = []

    def f_of_t(t_kelvin: float) -> float:
        result = free_energy(model, geom.at_temperature(t_kelvin), cfg)
        flags.append(result.converged)
        assert result.free_energy is not None
        return result.free_energy

    center = free_energy(model, geom, cfg)
    assert center.free_energy is not None
    entropy = -richardson_derivative(f_of_t, geom.t_kelvin, step)
    return center.model_copy(
        update={
            "entropy": entropy,
            "internal_energy": center.free_energy + geom.t_kelvin * entropy,
            "converged": center.converged and step_ok and all(flags),
        }
    )


def internal_energy_beta(
    model: DispersionModel,
    geom: PlateGeometry,
    cfg: QuadratureConfig | None = None,
    diff: DifferentiationConfig | None = None,
) -> float:
    """U = d(beta F)/d(beta), differenced in beta = 1/T; nJ/m^2."""
    cfg = cfg or QuadratureConfig()
    diff = diff or DifferentiationConfig()
    beta = 1.0 / geom.t_kelvin

    def scaled(b: float) -> float:
        result = free_energy(model, geom.at_temperature(1.0 / b), cfg)
        assert result.free_energy is not None
        return b * result.free_energy

    return richardson_derivative(scaled, beta, diff.rel_step * beta)


def thermo(
    model: DispersionModel,
    geom: PlateGeometry,
    cfg: QuadratureConfig | None = None,
    diff: DifferentiationConfig | None = None,
) -> ThermoResult:
    cfg = cfg or QuadratureConfig()
    force = pressure(model, geom, cfg)
    energy = entropy_internal(model, geom, cfg, diff)
    return energy.model_copy(
        update={
            "pressure": force.pressure,
            "terms_used": max(force.terms_used, energy.terms_used),
            "converged": force.converged and energy.converged,
            "truncation_bound": force.truncation_bound,
        }
    )


def matsubara_integrand(model: DispersionModel, geom: PlateGeometry, m: int, y: float) -> tuple[float, float]:
    """(TM, TE) pressure integrand of mode m at y, without the m = 0 half weight."""
    if m < 0:
        raise DomainError(f"Matsubara index must be >= 0, got {m}")
    yy = np.asarray(y, dtype=float)
    if m == 0:
        a_coeff, b_coeff = zero_mode_arrays(model, yy, geom.a_um)
    else:
        lower = m * geom.gamma
        if y < lower:
            raise DomainError(f"y={y:g} lies below the mode threshold m*gamma={lower:g}")
        eps = eval_model(model, units.matsubara_ev(m, geom.t_kelvin), geom.t_kelvin)
        a_coeff, b_coeff = squared_coefficients(eps, yy / lower)
    tm, te = _pressure_kernel(a_coeff, b_coeff, yy)
    return float(tm), float(te)


def _coefficient_samples(model: DispersionModel, geom: PlateGeometry, modes: int) -> list[CoefficientSample]:
    samples: list[CoefficientSample] = []
    for m in range(modes):
        for y in SAMPLE_POINTS:
            if m == 0:
                a_coeff, b_coeff = zero_mode_arrays(model, y, geom.a_um)
            else:
                lower = m * geom.gamma
                if y < lower:
                    continue
                eps = eval_model(model, units.matsubara_ev(m, geom.t_kelvin), geom.t_kelvin)
                a_coeff, b_coeff = squared_coefficients(eps, y / lower)
            samples.append(CoefficientSample(m=m, y=y, a_coeff=float(a_coeff), b_coeff=float(b_coeff)))
    return samples


def mode_breakdown(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig | None = None) -> ModeBreakdown:
    """Share of the pressure carried by each Matsubara mode, in percent."""
    cfg = cfg or QuadratureConfig()
    sums = _matsubara_sums(model, geom, cfg, _pressure_kernel)
    prefactor = _pressure_prefactor(geom)
    tm_total = units.natural_pressure_to_mpa(prefactor * math.fsum(sums.tm))
    te_total = units.natural_pressure_to_mpa(prefactor * math.fsum(sums.te))
    total = units.natural_pressure_to_mpa(prefactor * sums.total())

    modes: list[ModeShare] = []
    for m, (tm, te) in enumerate(zip(sums.tm, sums.te)):
        mode_pressure = units.natural_pressure_to_mpa(prefactor * (tm + te))
        both = tm + te
        modes.append(
            ModeShare(
                m=m,
                pressure=mode_pressure,
                fraction=100.0 * mode_pressure / total if total else 0.0,
                tm_share=100.0 * tm / both if both else 0.0,
                te_share=100.0 * te / both if both else 0.0,
            )
        )

    return ModeBreakdown(
        model=_label(model),
        a_um=geom.a_um,
        t_kelvin=geom.t_kelvin,
        modes=modes,
        total_pressure=total,
        tm_pressure=tm_total,
        te_pressure=te_total,
        coefficient_samples=_coefficient_samples(model, geom, min(SAMPLE_MODES, sums.terms_used)),
        terms_used=sums.terms_used,
        converged=sums.converged,
    )


def mim_deviation(model: DispersionModel, geom: PlateGeometry, cfg: QuadratureConfig | None = None) -> float:
    """Percent by which the modified-ideal-metal low-T pressure overshoots the engine's."""
    result = pressure(model, geom, cfg)
    assert result.pressure is not None
    reference = units.natural_pressure_to_mpa(mim_pressure_lowT(geom.a_um, geom.t_inv_um))
    return 100.0 * (abs(reference) - abs(result.pressure)) / abs(result.pressure)
