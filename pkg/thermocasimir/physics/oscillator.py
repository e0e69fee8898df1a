"""Three coupled harmonic oscillators as a statistical-mechanics analogue.

Oscillators 1 and 2 interact only through oscillator 3. Coordinate coupling
behaves like the TM modes, momentum coupling like the TE modes: its
induced free energy vanishes classically. Units are arbitrary but shared by
frequencies and temperature (hbar = k_B = 1).
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike

from thermocasimir.core.errors import DomainError, InstabilityError
from thermocasimir.core.types import CouplingKind, DifferentiationConfig, InducedThermo, OscillatorSystem
from thermocasimir.physics.matsubara import TruncationMonitor, derivative_step, richardson_derivative

logger = logging.getLogger(__name__)

INDUCED_REL_TOL = 1e-14
INDUCED_MAX_TERMS = 1_000_000
_BLOCK = 1024
_STEP_FLOOR = 1e-9


def _shifted_a3(system: OscillatorSystem, zeta_sq: ArrayLike) -> np.ndarray:
    base = system.a3 + np.asarray(zeta_sq, dtype=float)
    if system.kind == CouplingKind.MOMENTUM:
        base = base + system.c**2 / system.a1 + system.c**2 / system.a2
    return base


def _d_factors(system: OscillatorSystem, zeta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    zeta_sq = np.asarray(zeta, dtype=float) ** 2
    a3 = _shifted_a3(system, zeta_sq)
    c2 = system.c**2
    factors = []
    for a_i in (system.a1, system.a2):
        if system.kind == CouplingKind.COORDINATE:
            factors.append(c2 / ((a_i + zeta_sq) * a3))
        else:
            factors.append(-zeta_sq * c2 / (a_i * (a_i + zeta_sq) * a3))
    return factors[0], factors[1]


def d_factor(system: OscillatorSystem, i: int, zeta: float) -> float:
    if i not in (1, 2):
        raise DomainError(f"oscillator index must be 1 or 2, got {i}")
    return float(_d_factors(system, zeta)[i - 1])


def _induced_log(system: OscillatorSystem, zeta: ArrayLike) -> np.ndarray:
    d1, d2 = _d_factors(system, zeta)
    return np.log1p(-d1 * d2 / ((1.0 - d1) * (1.0 - d2)))


def q_determinant(system: OscillatorSystem, zeta: float) -> float:
    """Determinant of the Matsubara-frequency matrix, in factored form."""
    zeta_sq = zeta * zeta
    d1, d2 = (float(d) for d in _d_factors(system, zeta))
    factors = (1.0 - d1, 1.0 - d2, 1.0 - d1 * d2 / ((1.0 - d1) * (1.0 - d2)))
    for index, factor in enumerate(factors, start=1):
        if not factor > 0.0:
            raise InstabilityError(f"determinant factor {index} is {factor:g} at zeta={zeta:g}")
    product = (system.a1 + zeta_sq) * (system.a2 + zeta_sq) * float(_shifted_a3(system, zeta_sq))
    return product * factors[0] * factors[1] * factors[2]


def direct_determinant(system: OscillatorSystem, zeta: float) -> float:
    zeta_sq = zeta * zeta
    a3 = float(_shifted_a3(system, zeta_sq))
    if system.kind == CouplingKind.COORDINATE:
        x1 = x2 = complex(system.c)
    else:
        x1 = 1j * system.c * zeta / math.sqrt(system.a1)
        x2 = 1j * system.c * zeta / math.sqrt(system.a2)
    matrix = np.array(
        [
            [system.a1 + zeta_sq, 0.0, x1],
            [0.0, system.a2 + zeta_sq, x2],
            [x1, x2, a3],
        ],
        dtype=complex,
    )
    return float(np.linalg.det(matrix).real)


def normal_mode_eigenvalues(system: OscillatorSystem) -> np.ndarray:
    """Squared normal-mode frequencies of the classical coupling matrix, ascending.

    For momentum coupling the matrix carries the shifted a3 and the product
    of eigenvalues is a1*a2*a3: the coupling drops out classically.
    """
    c = system.c
    if system.kind == CouplingKind.COORDINATE:
        matrix = np.array([[system.a1, 0.0, c], [0.0, system.a2, c], [c, c, system.a3]])
    else:
        matrix = np.array([[system.a1, 0.0, -c], [0.0, system.a2, -c], [-c, -c, float(_shifted_a3(system, 0.0))]])
    return np.linalg.eigvalsh(matrix)


def classical_induced_free_energy(system: OscillatorSystem, temperature: float) -> float:
    if temperature <= 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")
    return 0.5 * temperature * float(_induced_log(system, 0.0))


def induced_free_energy(system: OscillatorSystem, temperature: float) -> InducedThermo:
    """(T/2) sum over all integer m of the induced log factor at zeta_m = 2 pi m T."""
    if temperature <= 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")

    zero = float(_induced_log(system, 0.0))
    terms = [zero]
    partial = zero
    monitor = TruncationMonitor(rel_tol=INDUCED_REL_TOL)
    converged = False
    first = 1
    while first <= INDUCED_MAX_TERMS and not converged:
        last = min(first + _BLOCK - 1, INDUCED_MAX_TERMS)
        modes = np.arange(first, last + 1, dtype=float)
        for value in 2.0 * _induced_log(system, 2.0 * math.pi * temperature * modes):
            term = float(value)
            terms.append(term)
            partial += term
            if monitor.update(term, partial):
                converged = True
                break
        first = last + 1

    if not converged:
        logger.warning("induced free energy at T=%g not converged after %d terms", temperature, INDUCED_MAX_TERMS)
    return InducedThermo(
        temperature=temperature,
        free_energy=0.5 * temperature * math.fsum(terms),
        terms_used=len(terms),
        converged=converged,
    )


def induced_entropy(
    system: OscillatorSystem,
    temperature: float,
    diff: DifferentiationConfig | None = None,
) -> InducedThermo:
    diff = diff or DifferentiationConfig()
    center = induced_free_energy(system, temperature)
    step = derivative_step(temperature, diff.rel_step, _STEP_FLOOR)
    step_ok = temperature - step > 0.0
    if not step_ok:
        step = 0.5 * temperature

    flags: list[bool] = []

    def f_of_t(t: float) -> float:
        result = induced_free_energy(system, t)
        flags.append(result.converged)
        return result.free_energy

    entropy = -richardson_derivative(f_of_t, temperature, step)
    return center.model_copy(update={"entropy": entropy, "converged": center.converged and step_ok and all(flags)})
