"""Closed-form thermodynamics of two ideal-metal plates.

Everything here is in natural units (hbar = c = k_B = 1). The gap ``a`` may
be given in any length unit; temperature is then an inverse length and
T = gamma / (2 pi a). Pressure is negative for attraction.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate, special

from thermocasimir.core.errors import DomainError, RegimeError
from thermocasimir.core.types import IdealThermo, SeriesParams
from thermocasimir.core.units import ZETA3

logger = logging.getLogger(__name__)

POISSON_CROSSOVER = 0.2
LOW_T_GAMMA_LIMIT = 0.5

# B_2 .. B_20
BERNOULLI_EVEN: tuple[Fraction, ...] = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
)

_SERIES_REACH = 20.0


# -- s_k sums ------------------------------------------------------------------------


def _s_arrays(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    e = np.exp(-2.0 * x)
    one_minus = -np.expm1(-2.0 * x)
    s0 = (1.0 + e) / one_minus
    s1 = 4.0 * x * e / one_minus**2
    s2 = 8.0 * x**2 * e * (1.0 + e) / one_minus**3
    s3 = x**3 * (96.0 * e**2 / one_minus**4 + 16.0 * e / one_minus**2)
    return s0, s1, s2, s3


def s_sum(k: int, x: ArrayLike) -> float | np.ndarray:
    """s_k(x) = (-x)^k d^k coth(x) / dx^k for k = 0..3.

    s0 = coth x, s1 = x/sinh^2 x, s2 = 2 x^2 cosh x/sinh^3 x,
    s3 = x^3 (6 + 4 sinh^2 x)/sinh^4 x; evaluated through exp(-2x).
    """
    if k not in (0, 1, 2, 3):
        raise DomainError(f"s_k is defined for k in 0..3, got {k}")
    xx = np.asarray(x, dtype=float)
    if np.any(~(xx > 0)):
        raise DomainError(f"x must be > 0, got {x!r}")
    value = _s_arrays(xx)[k]
    return float(value) if np.ndim(x) == 0 else value


# -- exact series ----------------------------------------------------------------------


def exact_thermo(params: SeriesParams, a: float) -> IdealThermo:
    """Sum over k of k^-3 s_j(gamma k), valid at any temperature.

    Terms are summed explicitly until gamma*k reaches 20, where every s_j
    has relaxed to its constant limit; the remainder is a Hurwitz zeta tail.
    """
    if a <= 0:
        raise DomainError(f"gap must be > 0, got {a}")
    gamma = params.gamma
    temperature = gamma / (2.0 * math.pi * a)

    needed = math.ceil(_SERIES_REACH / gamma)
    terms = min(needed, params.k_max)
    converged = needed <= params.k_max
    if not converged:
        logger.warning("ideal-metal series needs %d terms at gamma=%g, capped at k_max=%d", needed, gamma, params.k_max)

    k = np.arange(1, terms + 1, dtype=float)
    s0, s1, s2, _ = _s_arrays(gamma * k)
    weight = k**-3
    tail = float(special.zeta(3.0, terms + 1))

    sum_f = math.fsum(weight * (s1 + s0)) + tail
    sum_p = math.fsum(weight * (s2 + 2.0 * s1 + 2.0 * s0)) + 2.0 * tail
    sum_u = math.fsum(weight * s2)
    sum_s = math.fsum(weight * (s2 - s1 - s0)) - tail

    prefactor = 1.0 / (8.0 * math.pi * a**2)
    return IdealThermo(
        gamma=gamma,
        a=a,
        free_energy=-temperature * prefactor * sum_f,
        pressure=-temperature * prefactor * sum_p / a,
        internal_energy=-temperature * prefactor * sum_u,
        entropy=-prefactor * sum_s,
        terms_used=terms,
        converged=converged,
    )


# -- Poisson-resummed form -------------------------------------------------------------


def _poisson_modes(gamma: float) -> np.ndarray:
    count = math.ceil(25.0 * gamma / math.pi**2) + 1
    return math.pi**2 * np.arange(1, count + 1, dtype=float) / gamma


def poisson_thermo(params: SeriesParams, a: float) -> IdealThermo:
    """Resummed series in u = pi^2 m / gamma; converges fastest at small gamma.

    Power-law pieces of each summand are summed in closed form through zeta
    values; only the exponentially decaying remainder is summed term by term.
    """
    if a <= 0:
        raise DomainError(f"gap must be > 0, got {a}")
    gamma = params.gamma
    temperature = gamma / (2.0 * math.pi * a)

    u = _poisson_modes(gamma)
    e = np.exp(-2.0 * u)
    one_minus = -np.expm1(-2.0 * u)
    inv_sinh_sq = 4.0 * e / one_minus**2
    cosh_over_sinh_cubed = 4.0 * e * (1.0 + e) / one_minus**3
    coth_excess = 2.0 * e / one_minus

    sum_u3 = (gamma / math.pi**2) ** 3 * ZETA3
    sum_u4 = (gamma / math.pi**2) ** 4 * math.pi**4 / 90.0

    # coth u/u^3 + 1/(u^2 sinh^2 u) - 2/u^4
    sum_g = sum_u3 - 2.0 * sum_u4 + math.fsum(coth_excess / u**3 + inv_sinh_sq / u**2)
    # u^-4 - cosh u/(u sinh^3 u)
    sum_p = sum_u4 - math.fsum(cosh_over_sinh_cubed / u)
    # u g'(u)
    sum_ug = -3.0 * sum_u3 + 8.0 * sum_u4 + math.fsum(
        -3.0 * inv_sinh_sq / u**2 - 3.0 * coth_excess / u**3 - 2.0 * cosh_over_sinh_cubed / u
    )

    free_energy = -(math.pi**2 / (720.0 * a**3)) * (1.0 + 45.0 * sum_g)
    pressure = -(math.pi**2 / (240.0 * a**4)) * (1.0 + 30.0 * sum_p)
    entropy = -(math.pi**3 / (8.0 * a**2 * gamma)) * sum_ug
    return IdealThermo(
        gamma=gamma,
        a=a,
        free_energy=free_energy,
        pressure=pressure,
        internal_energy=free_energy + temperature * entropy,
        entropy=entropy,
        terms_used=int(u.size),
        converged=True,
    )


def ideal_thermo(params: SeriesParams, a: float) -> IdealThermo:
    if params.gamma < POISSON_CROSSOVER:
        return poisson_thermo(params, a)
    return exact_thermo(params, a)


def cotangent_sum(gamma: float, terms: int = 1000) -> float:
    """sum over all integers m of gamma/(gamma^2 + (pi m)^2), which equals coth(gamma)."""
    if gamma <= 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    m = np.arange(1, terms + 1, dtype=float)
    body = 1.0 / gamma + 2.0 * math.fsum(gamma / (gamma**2 + (math.pi * m) ** 2))

    c2 = (gamma / math.pi) ** 2
    start = terms + 1
    tail = (gamma / math.pi**2) * (
        special.polygamma(1, start) - c2 * special.polygamma(3, start) / 6.0 + c2**2 * special.polygamma(5, start) / 120.0
    )
    return body + 2.0 * float(tail)


# -- low temperature -------------------------------------------------------------------


def _check_low_t(gamma: float) -> None:
    if gamma > LOW_T_GAMMA_LIMIT:
        raise RegimeError(
            f"low-temperature expansion requires gamma <= {LOW_T_GAMMA_LIMIT}, got {gamma:g}",
            parameter="gamma",
            value=gamma,
            limit=LOW_T_GAMMA_LIMIT,
        )


def lowT_expansions(params: SeriesParams, a: float) -> IdealThermo:
    """Leading low-temperature forms; corrections are exponentially small in 1/gamma."""
    _check_low_t(params.gamma)
    if a <= 0:
        raise DomainError(f"gap must be > 0, got {a}")
    t = params.gamma / (2.0 * math.pi * a)
    x = 2.0 * a * t

    pressure = -(math.pi**2 / (240.0 * a**4)) * (1.0 + x**4 / 3.0)
    free_energy = -(math.pi**2 / (720.0 * a**3)) * (1.0 + 45.0 * ZETA3 * x**3 / math.pi**3 - x**4)
    internal_energy = -(math.pi**2) / (720.0 * a**3) + ZETA3 * t**3 / math.pi - math.pi**2 * a * t**4 / 15.0
    entropy = 3.0 * ZETA3 * t**2 / (2.0 * math.pi) - 4.0 * math.pi**2 * a * t**3 / 45.0
    return IdealThermo(
        gamma=params.gamma,
        a=a,
        pressure=pressure,
        free_energy=free_energy,
        internal_energy=internal_energy,
        entropy=entropy,
    )


def _c_integrand(x: float) -> float:
    if x < 0.1:
        x2 = x * x
        return 1.0 / 45.0 - 2.0 * x2 / 945.0 + x2 * x2 / 4725.0
    return (1.0 / x + x / 3.0 - 1.0 / math.tanh(x)) / x**3


def constant_C(*, rel_tol: float = 1e-12) -> float:
    """Integral over (0, inf) of x^-3 (1/x + x/3 - coth x); equals zeta(3)/pi^2."""
    head, _ = integrate.quad(_c_integrand, 0.0, 1.0, epsabs=0.0, epsrel=rel_tol, limit=200)
    tail, _ = integrate.quad(_c_integrand, 1.0, math.inf, epsabs=0.0, epsrel=rel_tol, limit=200)
    return head + tail


def em_sum(
    func: Callable[[float], float],
    odd_derivs: Sequence[float],
    *,
    orders: int | None = None,
    rel_tol: float = 1e-10,
) -> float:
    """Euler-Maclaurin estimate of sum_{k>=0} func(k).

    odd_derivs[q] is func^(2q+1)(0); at most ten correction orders are used.
    """
    count = len(odd_derivs) if orders is None else min(orders, len(odd_derivs))
    if count > len(BERNOULLI_EVEN):
        raise DomainError(f"at most {len(BERNOULLI_EVEN)} correction orders are available")

    integral, _ = integrate.quad(func, 0.0, math.inf, epsabs=0.0, epsrel=rel_tol, limit=200)
    corrections = [
        float(BERNOULLI_EVEN[q]) / math.factorial(2 * q + 2) * odd_derivs[q]
        for q in range(count)
    ]
    return integral + 0.5 * func(0.0) - math.fsum(corrections)


def perfect_conductor_summand(x: float, a: float, beta: float) -> float:
    """Pressure summand of mode x: -(2/(pi beta)) int_{2 pi x/beta}^inf q^2/(e^{2qa}-1) dq."""
    if a <= 0 or beta <= 0:
        raise DomainError("a and beta must be > 0")
    lower = 2.0 * math.pi * abs(x) / beta

    def integrand(q: float) -> float:
        return q * q * math.exp(-2.0 * q * a) / -math.expm1(-2.0 * q * a) if q > 0 else 0.0

    value, _ = integrate.quad(integrand, lower, math.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return -2.0 * value / (math.pi * beta)


def perfect_conductor_odd_derivatives(beta: float, orders: int = 2) -> list[float]:
    """Only the third derivative at zero survives; the rest vanish with the odd Bernoulli numbers."""
    derivs = [0.0] * orders
    if orders >= 2:
        derivs[1] = -16.0 * math.pi**2 / beta**4
    return derivs


# -- modified ideal metal ------------------------------------------------------------------


def _zero_mode_te_shift(a: float, temperature: float) -> float:
    return ZETA3 * temperature / (8.0 * math.pi * a**3)


def mim_pressure(params: SeriesParams, a: float) -> float:
    """Ideal-metal pressure with the TE zero mode removed."""
    sdm = ideal_thermo(params, a)
    return sdm.pressure + _zero_mode_te_shift(a, sdm.temperature)


def mim_thermo(params: SeriesParams, a: float) -> IdealThermo:
    sdm = ideal_thermo(params, a)
    t = sdm.temperature
    free_shift = ZETA3 * t / (16.0 * math.pi * a**2)
    entropy_shift = -ZETA3 / (16.0 * math.pi * a**2)
    assert sdm.entropy is not None
    return sdm.model_copy(
        update={
            "pressure": sdm.pressure + _zero_mode_te_shift(a, t),
            "free_energy": sdm.free_energy + free_shift,
            "entropy": sdm.entropy + entropy_shift,
        }
    )


def mim_pressure_lowT(a: float, temperature: float) -> float:
    if a <= 0 or temperature < 0:
        raise DomainError("a must be > 0 and temperature >= 0")
    return -(math.pi**2 / (240.0 * a**4)) * (1.0 + 16.0 * (a * temperature) ** 4 / 3.0) + _zero_mode_te_shift(
        a, temperature
    )


def mim_delta(a: float, temperature: float) -> float:
    """Ratio of the linear MIM term to the T = 0 pressure, 30 zeta(3) a T / pi^3."""
    return 30.0 * ZETA3 * a * temperature / math.pi**3


def mim_entropy_lowT(a: float, temperature: float) -> float:
    if a <= 0 or temperature < 0:
        raise DomainError("a must be > 0 and temperature >= 0")
    _check_low_t(2.0 * math.pi * a * temperature)
    return -ZETA3 / (16.0 * math.pi * a**2)
