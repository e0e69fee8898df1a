"""Unit conversions between the CLI boundary and natural units.

Internally hbar = c = k_B = 1, lengths are in micrometres and energies
(frequencies, temperatures) in eV. The CLI speaks a in um, T in K,
pressures in mPa, free/internal energies in nJ/m^2 and entropies in
nJ/(m^2 K).
"""

from __future__ import annotations

import math

from scipy import constants

HBAR_C_EV_UM = constants.hbar * constants.c / constants.e * 1e6
K_B_EV = constants.k / constants.e
EV_TO_RAD_S = constants.e / constants.hbar

ZETA3 = 1.2020569031595943

_EV_PER_UM3_TO_MPA = constants.e * 1e18 * 1e3
_EV_PER_UM2_TO_NJ_M2 = constants.e * 1e12 * 1e9


def kelvin_to_ev(t_kelvin: float) -> float:
    return K_B_EV * t_kelvin


def kelvin_to_inverse_um(t_kelvin: float) -> float:
    return K_B_EV * t_kelvin / HBAR_C_EV_UM


def inverse_um_to_kelvin(t_inv_um: float) -> float:
    return t_inv_um * HBAR_C_EV_UM / K_B_EV


def ev_to_inverse_um(energy_ev: float) -> float:
    return energy_ev / HBAR_C_EV_UM


def gamma(a_um: float, t_kelvin: float) -> float:
    """Dimensionless 2*pi*a*T (0.823 at 1 um and 300 K)."""
    return 2.0 * math.pi * a_um * kelvin_to_inverse_um(t_kelvin)


def kelvin_for_gamma(gamma_value: float, a_um: float) -> float:
    return inverse_um_to_kelvin(gamma_value / (2.0 * math.pi * a_um))


def matsubara_ev(m: int, t_kelvin: float) -> float:
    return 2.0 * math.pi * m * kelvin_to_ev(t_kelvin)


def ev_per_um3_to_mpa(value: float) -> float:
    return value * _EV_PER_UM3_TO_MPA


def ev_per_um2_to_nj_m2(value: float) -> float:
    return value * _EV_PER_UM2_TO_NJ_M2


def natural_pressure_to_mpa(value_inv_um4: float) -> float:
    return ev_per_um3_to_mpa(value_inv_um4 * HBAR_C_EV_UM)


def natural_energy_to_nj_m2(value_inv_um3: float) -> float:
    return ev_per_um2_to_nj_m2(value_inv_um3 * HBAR_C_EV_UM)


def natural_entropy_to_nj_m2_k(value_inv_um2: float) -> float:
    return ev_per_um2_to_nj_m2(value_inv_um2 * K_B_EV)
