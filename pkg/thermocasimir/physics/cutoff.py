"""Sharp-cutoff model of a real metal with constant large permittivity.

The TE coefficient is 1 below p = sqrt(eps) and 0 above it, which turns the
TE contribution into a difference of two ideal-metal free energies. Natural
units throughout, as in ``ideal_metal``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pydantic import ValidationError

from thermocasimir.core.errors import DomainError, RegimeError
from thermocasimir.core.types import CutoffParams, IdealThermo, SeriesParams
from thermocasimir.core.units import ZETA3
from thermocasimir.physics.ideal_metal import ideal_thermo

TE_ENTROPY_LIMIT = 0.1


def _params(eps: float, a: float, temperature: float) -> CutoffParams:
    if a <= 0 or temperature < 0:
        raise DomainError("a must be > 0 and temperature >= 0")
    try:
        return CutoffParams(eps=eps, gamma=2.0 * math.pi * a * temperature)
    except ValidationError as exc:
        raise DomainError(f"invalid cutoff parameters: {exc.errors()[0]['msg']}") from exc


def _ideal(a: float, temperature: float) -> IdealThermo | None:
    if temperature == 0.0:
        return None
    return ideal_thermo(SeriesParams(gamma=2.0 * math.pi * a * temperature), a)


def _ideal_free_energy(a: float, temperature: float) -> float:
    result = _ideal(a, temperature)
    return -(math.pi**2) / (720.0 * a**3) if result is None else result.free_energy


def _ideal_entropy(a: float, temperature: float) -> float:
    result = _ideal(a, temperature)
    if result is None:
        return 0.0
    assert result.entropy is not None
    return result.entropy


def step_te_coefficient(p: float, eps: float) -> int:
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    return 1 if p < math.sqrt(eps) else 0


def free_energy_cutoff(eps: float, a: float, temperature: float) -> float:
    """F_I(T) - F_I(sqrt(eps) T) / (2 sqrt(eps))."""
    root = math.sqrt(_params(eps, a, temperature).eps)
    return _ideal_free_energy(a, temperature) - _ideal_free_energy(a, root * temperature) / (2.0 * root)


def free_energy_cutoff_te(eps: float, a: float, temperature: float) -> float:
    root = math.sqrt(_params(eps, a, temperature).eps)
    return 0.5 * _ideal_free_energy(a, temperature) - _ideal_free_energy(a, root * temperature) / (2.0 * root)


def entropy_cutoff(eps: float, a: float, temperature: float) -> float:
    """-dF/dT of ``free_energy_cutoff``: S_I(T) - S_I(sqrt(eps) T) / 2."""
    root = math.sqrt(_params(eps, a, temperature).eps)
    return _ideal_entropy(a, temperature) - 0.5 * _ideal_entropy(a, root * temperature)


def entropy_cutoff_te(eps: float, a: float, temperature: float) -> float:
    root = math.sqrt(_params(eps, a, temperature).eps)
    return 0.5 * (_ideal_entropy(a, temperature) - _ideal_entropy(a, root * temperature))


def te_entropy_lowT(eps: float, a: float, temperature: float) -> float:
    """(3 zeta(3) / 4 pi)(1 - eps) T^2, valid while sqrt(eps) a T <= 0.1.

    The next correction goes like -a eps^(5/2) T^3 with an unknown prefactor and is not included.
    """
    params = _params(eps, a, temperature)
    reach = math.sqrt(params.eps) * a * temperature
    if reach > TE_ENTROPY_LIMIT:
        raise RegimeError(
            f"TE entropy asymptote needs sqrt(eps)*a*T <= {TE_ENTROPY_LIMIT}, got {reach:g}",
            parameter="sqrt(eps)*a*T",
            value=reach,
            limit=TE_ENTROPY_LIMIT,
        )
    return 3.0 * ZETA3 * (1.0 - params.eps) * temperature**2 / (4.0 * math.pi)


@dataclass(frozen=True, slots=True)
class RegimeEstimate:
    regime: str
    free_energy: float


def free_energy_regimes(eps: float, a: float, temperature: float) -> RegimeEstimate:
    """Leading form of the cutoff free energy in the low, intermediate or high regime."""
    params = _params(eps, a, temperature)
    root = math.sqrt(params.eps)
    k_ideal = ZETA3 / (8.0 * math.pi * a**2)
    f_zero = -(math.pi**2) / (720.0 * a**3)
    at = a * temperature

    if at > 1.0:
        return RegimeEstimate("high", -0.5 * k_ideal * temperature)
    if root * at < 1.0:
        value = (1.0 - 1.0 / (2.0 * root)) * f_zero - (ZETA3 / (4.0 * math.pi)) * (2.0 - params.eps) * temperature**3
        return RegimeEstimate("low", value)
    return RegimeEstimate("intermediate", f_zero + 0.5 * k_ideal * temperature)
