"""Physical constants and material parameter sets.

All internal quantities are strict SI (J, m, s, A, K). Constants come from
the CODATA values shipped with :mod:`scipy.constants`.
"""

import math
import warnings
from dataclasses import dataclass, fields

import scipy.constants as _codata

from .errors import ConfigError, UnknownMaterialError


class ModelWarning(UserWarning):
    """Parameters are outside the regime the device model assumes."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    h: float
    e: float
    e_star: float
    m_e: float
    m_star_default: float
    k_B: float
    eps0: float
    Phi0: float


def _make_constants():
    e = _codata.e
    m_e = _codata.m_e
    return PhysicalConstants(
        hbar=_codata.hbar,
        h=_codata.h,
        e=e,
        e_star=2 * e,
        m_e=m_e,
        m_star_default=2 * m_e,
        k_B=_codata.k,
        eps0=_codata.epsilon_0,
        Phi0=_codata.h / (2 * e),
    )


CONSTANTS = _make_constants()

EV = CONSTANTS.e  # joules per electron-volt


def _check_positive(obj):
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            if not (value > 0) or not math.isfinite(value):
                raise ConfigError(
                    f"{type(obj).__name__}.{f.name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class SuperconductorParams:
    """Electrode material.

    ``rho_F`` is the density of states at the Fermi level per unit energy and
    volume (J^-1 m^-3); ``n_star`` the condensate (pair) density in m^-3.
    """

    name: str
    T_C: float
    Delta_SC: float
    rho_F: float
    n_star: float
    J_C_max: float
    tau_n: float
    eps_F: float

    def __post_init__(self):
        _check_positive(self)
        if self.Delta_SC >= self.eps_F:
            raise ConfigError(
                f"Delta_SC ({self.Delta_SC:.4g} J) must be below eps_F ({self.eps_F:.4g} J)")
        if self.Delta_SC > self.eps_F / 10:
            warnings.warn(
                f"{self.name}: Delta_SC > eps_F/10, the eps_F >> Delta_SC expansion "
                "used by the noise closed forms is poor", ModelWarning, stacklevel=3)


@dataclass(frozen=True)
class BarrierParams:
    """Semiconductor barrier. ``d`` is the full thickness (2a)."""

    eps_r: float
    m_star: float
    d: float
    V0_base: float
    gate_lever: float = 1.0

    def __post_init__(self):
        _check_positive(self)
        if self.eps_r < 1:
            raise ConfigError(f"eps_r must be >= 1, got {self.eps_r!r}")
        if self.gate_lever > 1:
            raise ConfigError(f"gate_lever must lie in (0, 1], got {self.gate_lever!r}")
        if self.d > 1e-9 * (1 + 1e-9):
            warnings.warn(
                f"barrier thickness {self.d:.3g} m exceeds ~1 nm; tunnelling currents "
                "will be strongly suppressed", ModelWarning, stacklevel=3)

    @property
    def a(self):
        return self.d / 2


def critical_frequency(sc):
    """Soft upper operating frequency k_B*T_C/h in Hz."""
    if not sc.T_C > 0:
        raise ConfigError("T_C must be positive")
    return CONSTANTS.k_B * sc.T_C / CONSTANTS.h


def thermal_energy(T):
    return CONSTANTS.k_B * T


def photon_energy(f):
    return CONSTANTS.h * f


def bcs_gap(T_C):
    """Zero-temperature weak-coupling BCS gap, 1.764*k_B*T_C."""
    return 1.764 * CONSTANTS.k_B * T_C


# Niobium. T_C = 10.0 K (not the tabulated 9.25 K) reproduces the quoted
# 208.27 GHz soft frequency. n_star is 1e20 cm^-3. tau_n puts I_C*R_n at
# 20 mV, i.e. R_n = 1 ohm when I_C = 20 mA.
_NB_T_C = 10.0
_NB_TAU_N = CONSTANTS.Phi0 / (2 * math.pi * 20e-3 * 1.0)

NIOBIUM = SuperconductorParams(
    name="niobium",
    T_C=_NB_T_C,
    Delta_SC=bcs_gap(_NB_T_C),
    rho_F=5.2e47,
    n_star=1e26,
    J_C_max=2e10,
    tau_n=_NB_TAU_N,
    eps_F=5.32 * EV,
)

PROVENANCE = {
    "niobium": {
        "T_C": "10.0 K, back-solved from f_c = 208.27 GHz (tabulated 9.25 K)",
        "Delta_SC": "BCS 1.764 k_B T_C",
        "rho_F": "~1.5 states/(eV atom) x 5.56e28 atoms/m^3, order of magnitude",
        "n_star": "1e20 cm^-3",
        "J_C_max": "2e6 A/cm^2",
        "tau_n": "Phi0/(2 pi * 20 mA * 1 ohm)",
        "eps_F": "5.32 eV, free-electron literature value",
    },
}

_REGISTRY = {"niobium": NIOBIUM}


def material_names():
    return sorted(_REGISTRY)


def builtin_material(name):
    """Look up a built-in superconductor by (case-insensitive) name."""
    try:
        return _REGISTRY[name.strip().lower()]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown material {name!r}; registry contains: {', '.join(material_names())}"
        ) from None


def default_barrier():
    """Silicon barrier, 1 nm thick, 1 eV high, pair mass 2 m_e."""
    return BarrierParams(eps_r=11.68, m_star=CONSTANTS.m_star_default, d=1e-9,
                         V0_base=1.0 * EV, gate_lever=1.0)
