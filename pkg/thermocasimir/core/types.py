from __future__ import annotations

import math
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from thermocasimir.core import units


class ModelKind(str, Enum):
    IDEAL = "ideal"
    CONSTANT = "constant"
    DRUDE = "drude"
    PLASMA = "plasma"
    TABULATED = "tabulated"


class CouplingKind(str, Enum):
    COORDINATE = "coordinate"
    MOMENTUM = "momentum"


class Quantity(str, Enum):
    FORCE = "force"
    FREE_ENERGY = "free-energy"
    THERMO = "thermo"


class Method(str, Enum):
    AUTO = "auto"
    NUMERIC = "numeric"
    ANALYTIC = "analytic"


# -- dispersion ----------------------------------------------------------------


class DrudeParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega_p: float = Field(gt=0, description="plasma frequency (eV)")
    nu: float = Field(gt=0, description="relaxation frequency (eV)")


class PlasmaParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega_p: float = Field(gt=0, description="plasma frequency (eV)")


class RelaxationParams(BaseModel):
    """Bloch-Grueneisen constants; nu(T) = k_conv * rho(T) + residual_nu."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    theta: float = Field(gt=0, description="Debye temperature (K)")
    c_bg: float = Field(gt=0, description="resistivity scale (Ohm m)")
    k_conv: float = Field(gt=0, description="resistivity to frequency (eV / (Ohm m))")
    residual_nu: float = Field(default=0.0, ge=0, description="impurity offset (eV)")


class SpectralTable(BaseModel):
    """Permittivity on the imaginary frequency axis, sampled at increasing zeta."""

    model_config = ConfigDict(extra="forbid")

    entries: list[tuple[float, float]]
    source: str = ""

    _zeta: Any = PrivateAttr(default=None)
    _eps: Any = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_entries(self) -> "SpectralTable":
        if len(self.entries) < 2:
            raise ValueError("spectral table needs at least 2 entries")
        previous_zeta = 0.0
        previous_eps = math.inf
        for zeta, eps in self.entries:
            if not (math.isfinite(zeta) and math.isfinite(eps)):
                raise ValueError("spectral table entries must be finite")
            if zeta <= previous_zeta:
                raise ValueError(f"zeta must be positive and strictly increasing (at zeta={zeta})")
            if eps >= previous_eps:
                raise ValueError(f"eps must be strictly decreasing (at zeta={zeta})")
            if eps < 1.0:
                raise ValueError(f"eps must be >= 1 (at zeta={zeta})")
            previous_zeta, previous_eps = zeta, eps
        return self

    def model_post_init(self, __context: Any) -> None:
        self._zeta = np.array([row[0] for row in self.entries], dtype=float)
        self._eps = np.array([row[1] for row in self.entries], dtype=float)

    @property
    def zeta(self) -> np.ndarray:
        return self._zeta

    @property
    def eps(self) -> np.ndarray:
        return self._eps


class OpticalConstantsTable(BaseModel):
    """Complex refractive index n' + i n'' on the real frequency axis."""

    model_config = ConfigDict(extra="forbid")

    entries: list[tuple[float, float, float]]
    source: str = ""

    @model_validator(mode="after")
    def validate_entries(self) -> "OpticalConstantsTable":
        if not self.entries:
            raise ValueError("optical constants table is empty")
        previous = 0.0
        for omega, _, n_im in self.entries:
            if omega <= previous:
                raise ValueError(f"omega must be positive and strictly increasing (at omega={omega})")
            if n_im < 0:
                raise ValueError(f"n_im must be >= 0 (at omega={omega})")
            previous = omega
        return self

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        data = np.asarray(self.entries, dtype=float)
        return data[:, 0], data[:, 1], data[:, 2]


class DispersionModel(BaseModel):
    """Tagged permittivity model evaluated at imaginary frequency.

    `sdm` only matters for the ideal metal: True keeps the TE zero mode
    (B0 = 1), False drops it (the modified ideal metal, B0 = 0).
    """

    model_config = ConfigDict(extra="forbid")

    kind: ModelKind
    sdm: bool = True
    eps0: float | None = None
    drude: DrudeParams | None = None
    relaxation: RelaxationParams | None = None
    plasma: PlasmaParams | None = None
    table: SpectralTable | None = None
    label: str = ""

    @model_validator(mode="after")
    def validate_kind(self) -> "DispersionModel":
        if self.kind == ModelKind.CONSTANT:
            if self.eps0 is None or not math.isfinite(self.eps0) or self.eps0 <= 1.0:
                raise ValueError("constant model needs a finite eps0 > 1")
        elif self.kind == ModelKind.DRUDE and self.drude is None:
            raise ValueError("drude model needs DrudeParams")
        elif self.kind == ModelKind.PLASMA and self.plasma is None:
            raise ValueError("plasma model needs PlasmaParams")
        elif self.kind == ModelKind.TABULATED and self.table is None:
            raise ValueError("tabulated model needs a SpectralTable")
        if self.relaxation is not None and self.kind != ModelKind.DRUDE:
            raise ValueError("RelaxationParams only apply to the drude model")
        return self

    @classmethod
    def ideal(cls, *, sdm: bool = True) -> "DispersionModel":
        return cls(kind=ModelKind.IDEAL, sdm=sdm, label="ideal" if sdm else "ideal-mim")

    @classmethod
    def constant(cls, eps0: float) -> "DispersionModel":
        return cls(kind=ModelKind.CONSTANT, eps0=eps0, label=f"const:{eps0:g}")

    @classmethod
    def drude_model(
        cls,
        params: DrudeParams,
        relaxation: RelaxationParams | None = None,
        *,
        label: str = "",
    ) -> "DispersionModel":
        return cls(
            kind=ModelKind.DRUDE,
            drude=params,
            relaxation=relaxation,
            label=label or f"drude:{params.omega_p:g},{params.nu:g}",
        )

    @classmethod
    def plasma_model(cls, params: PlasmaParams, *, label: str = "") -> "DispersionModel":
        return cls(kind=ModelKind.PLASMA, plasma=params, label=label or f"plasma:{params.omega_p:g}")

    @classmethod
    def tabulated(cls, table: SpectralTable, *, label: str = "") -> "DispersionModel":
        return cls(kind=ModelKind.TABULATED, table=table, label=label or f"table:{table.source}")

    @property
    def is_ideal(self) -> bool:
        return self.kind == ModelKind.IDEAL


# -- reflection ------------------------------------------------------------------


class LifshitzVariables(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    p: float = Field(ge=1.0)
    s: float
    eps: float


class ReflectionPair(BaseModel):
    """Squared TM (A) and TE (B) reflection coefficients."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a_coeff: float = Field(ge=0.0, le=1.0)
    b_coeff: float = Field(ge=0.0, le=1.0)


class SlabProfile(BaseModel):
    """Regions z < 0 (eps1), 0 < z < a (eps3) and z > a (eps2)."""

    model_config = ConfigDict(extra="forbid")

    eps1: float | DispersionModel
    eps2: float | DispersionModel
    eps3: float | DispersionModel = 1.0
    a_um: float = Field(gt=0)

    @model_validator(mode="after")
    def validate_regions(self) -> "SlabProfile":
        for name in ("eps1", "eps2", "eps3"):
            value = getattr(self, name)
            if isinstance(value, DispersionModel):
                if value.is_ideal:
                    raise ValueError(f"{name}: the ideal metal has no finite Green's function")
            elif not math.isfinite(value) or value < 1.0:
                raise ValueError(f"{name} must be a finite permittivity >= 1")
        return self


# -- lifshitz engine --------------------------------------------------------------


class PlateGeometry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    a_um: float = Field(gt=0, description="gap width (um)")
    t_kelvin: float = Field(gt=0, description="temperature (K)")

    @property
    def t_ev(self) -> float:
        return units.kelvin_to_ev(self.t_kelvin)

    @property
    def beta(self) -> float:
        """Inverse temperature in 1/eV."""
        return 1.0 / self.t_ev

    @property
    def t_inv_um(self) -> float:
        return units.kelvin_to_inverse_um(self.t_kelvin)

    @property
    def gamma(self) -> float:
        return units.gamma(self.a_um, self.t_kelvin)

    def at_temperature(self, t_kelvin: float) -> "PlateGeometry":
        return PlateGeometry(a_um=self.a_um, t_kelvin=t_kelvin)

    def at_gap(self, a_um: float) -> "PlateGeometry":
        return PlateGeometry(a_um=a_um, t_kelvin=self.t_kelvin)


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    y_max: float = Field(default=30.0, ge=10.0)
    rel_tol: float = Field(default=1e-9, gt=0.0, le=1e-4)
    m_max: int = Field(default=100_000, ge=1)


class DifferentiationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rel_step: float = Field(default=1e-3, gt=0.0, le=0.25)
    t_floor: float = Field(default=1e-4, gt=0.0, description="smallest step in kelvin")


class ThermoResult(BaseModel):
    """Per-area thermodynamics of one (model, a, T) point.

    Units: pressure mPa, free/internal energy nJ/m^2, entropy nJ/(m^2 K).
    Fields a computation did not produce stay None.
    """

    model_config = ConfigDict(extra="forbid")

    model: str
    a_um: float
    t_kelvin: float
    pressure: float | None = None
    free_energy: float | None = None
    internal_energy: float | None = None
    entropy: float | None = None
    terms_used: int = 0
    converged: bool = True
    truncation_bound: float | None = None
    method: Method = Method.NUMERIC


class ModeShare(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: int = Field(ge=0)
    pressure: float
    fraction: float
    te_share: float
    tm_share: float


class CoefficientSample(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: int = Field(ge=0)
    y: float
    a_coeff: float
    b_coeff: float


class ModeBreakdown(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: str
    a_um: float
    t_kelvin: float
    modes: list[ModeShare]
    total_pressure: float
    tm_pressure: float
    te_pressure: float
    coefficient_samples: list[CoefficientSample] = Field(default_factory=list)
    terms_used: int = 0
    converged: bool = True

    @model_validator(mode="after")
    def validate_fractions(self) -> "ModeBreakdown":
        if self.modes and self.total_pressure != 0.0:
            total = math.fsum(mode.fraction for mode in self.modes)
            if abs(total - 100.0) > 1e-6:
                raise ValueError(f"mode fractions sum to {total}, expected 100")
        return self


# -- ideal metal / cutoff -----------------------------------------------------------


class SeriesParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gamma: float = Field(gt=0)
    k_max: int = Field(default=1_000_000, ge=1)
    em_orders: int = Field(default=2, ge=0, le=10)


class IdealThermo(BaseModel):
    """Natural units (hbar = c = k_B = 1) for a gap measured in any length unit."""

    model_config = ConfigDict(extra="forbid")

    gamma: float
    a: float
    pressure: float
    free_energy: float
    internal_energy: float | None = None
    entropy: float | None = None
    terms_used: int = 0
    converged: bool = True

    @property
    def temperature(self) -> float:
        return self.gamma / (2.0 * math.pi * self.a)


class CutoffParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    eps: float = Field(ge=25.0)
    gamma: float = Field(ge=0.0)

    @property
    def gamma_c(self) -> float:
        return self.gamma * math.sqrt(self.eps)


# -- oscillator ----------------------------------------------------------------------


class OscillatorSystem(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    a1: float = Field(gt=0)
    a2: float = Field(gt=0)
    a3: float = Field(gt=0)
    c: float
    kind: CouplingKind = CouplingKind.COORDINATE

    @model_validator(mode="after")
    def validate_stability(self) -> "OscillatorSystem":
        if self.kind == CouplingKind.COORDINATE:
            if self.a1 * self.a2 * self.a3 <= self.c**2 * (self.a1 + self.a2):
                raise ValueError("unstable coordinate coupling: a1*a2*a3 must exceed c^2*(a1+a2)")
        return self


class InducedThermo(BaseModel):
    model_config = ConfigDict(extra="forbid")

    temperature: float
    free_energy: float
    entropy: float | None = None
    terms_used: int = 0
    converged: bool = True


# -- sweeps ----------------------------------------------------------------------------


class SweepPoint(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    model_spec: str
    a_um: float = Field(gt=0)
    t_kelvin: float = Field(gt=0)
