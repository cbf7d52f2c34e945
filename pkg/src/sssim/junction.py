"""Gate-modulated superconductor/semiconductor/superconductor junction.

Electrode 1 sits at x = -a, electrode 2 at x = +a, with a rectangular barrier
of height V0_eff between them. Inside the barrier the pair wavefunction is a
combination of cosh(x/zeta) and sinh(x/zeta), and the Josephson current
follows from matching it to the two electrode condensates.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .constants import CONSTANTS, BarrierParams, ModelWarning, SuperconductorParams
from .errors import AboveBarrierError, BarrierCollapseError, DomainError
from .numerics import Tolerance, find_root, log_sinh

_C = CONSTANTS
_LOG_TINY = math.log(5e-324)


class Branch(str, Enum):
    SUPERCURRENT = "supercurrent"
    NORMAL = "normal"


@dataclass(frozen=True)
class WavefunctionState:
    """Condensate density (m^-3) and phase (rad) on each electrode."""

    n1: float
    theta1: float
    n2: float
    theta2: float

    def __post_init__(self):
        if not (self.n1 > 0 and self.n2 > 0):
            raise DomainError(f"condensate densities must be positive, got {self.n1!r}, {self.n2!r}")

    @classmethod
    def symmetric(cls, n_star, phase_difference=math.pi / 2):
        return cls(n_star, phase_difference, n_star, 0.0)


def carrier_constants(convention, m_star):
    """(charge magnitude, mass) for the ``pair`` or ``bare`` convention."""
    if convention == "pair":
        return _C.e_star, m_star
    if convention == "bare":
        return _C.e, _C.m_e
    raise ValueError(f"convention must be 'pair' or 'bare', got {convention!r}")


def gap_charge_value(gap_charge):
    if gap_charge == "e":
        return _C.e
    if gap_charge == "e_star":
        return _C.e_star
    raise ValueError(f"gap_charge must be 'e' or 'e_star', got {gap_charge!r}")


@dataclass(frozen=True)
class JunctionDevice:
    """A single junction: materials, area and the convention switches.

    ``literal_half`` reinstates the factor 1/2 printed in the closed-form
    current density; by default the prefactor is the one obtained from the
    matched wavefunction coefficients.
    """

    sc: SuperconductorParams
    barrier: BarrierParams
    area: float
    state: Optional[WavefunctionState] = None
    convention: str = "pair"
    literal_half: bool = False
    gap_charge: str = "e"

    def __post_init__(self):
        if not self.area > 0:
            raise DomainError(f"junction area must be positive, got {self.area!r}")
        if self.state is None:
            object.__setattr__(self, "state", WavefunctionState.symmetric(self.sc.n_star))
        carrier_constants(self.convention, self.barrier.m_star)
        gap_charge_value(self.gap_charge)

    @property
    def a(self):
        return self.barrier.d / 2

    @property
    def capacitance(self):
        return junction_capacitance(self.barrier.eps_r, self.area, self.barrier.d)

    @property
    def max_critical_current(self):
        return self.sc.J_C_max * self.area

    @property
    def gap_voltage(self):
        return gap_voltage(self.sc.Delta_SC, self.gap_charge)

    @property
    def product_IcRn(self):
        return _C.Phi0 / (2 * math.pi * self.sc.tau_n)

    def decay_length(self, V_GS, E0=0.0):
        V0_eff = effective_barrier(self.barrier, V_GS)
        return decay_length(V0_eff, E0, self.barrier.m_star)

    def log_critical_current_density(self, zeta):
        return log_critical_current_density(self.state, self.a, zeta, self.barrier.m_star,
                                            self.convention, self.literal_half)


class QPoint(NamedTuple):
    current: float
    voltage: float
    branch: Branch


@dataclass(frozen=True)
class CriticalCurrent:
    value: float
    unclamped: float
    zeta: float
    clamped: bool
    underflow: bool = False
    log_unclamped: float = field(default=float("nan"), repr=False)

    def __float__(self):
        return self.value


@dataclass
class IVCurve:
    currents: np.ndarray
    voltages: np.ndarray
    branches: list
    I_C: float
    R_n: float
    V_gap: float
    V_GS: float = 0.0

    @property
    def samples(self):
        return list(zip(self.currents.tolist(), self.voltages.tolist()))

    def normal_slope(self):
        """Least-squares slope of the normal branch, or None with < 2 points."""
        mask = np.array([b is Branch.NORMAL for b in self.branches])
        if mask.sum() < 2:
            return None
        slope, _ = np.polyfit(self.currents[mask], self.voltages[mask], 1)
        return float(slope)


def effective_barrier(barrier, V_GS):
    """Barrier height in joules under gate drive: V0_base - gate_lever*e*V_GS."""
    V0_eff = barrier.V0_base - barrier.gate_lever * _C.e * V_GS
    if not V0_eff > 0:
        raise BarrierCollapseError(
            f"gate voltage {V_GS!r} V collapses the barrier (V0_eff = {V0_eff / _C.e:.4g} eV)")
    return V0_eff


def decay_length(V0_eff, E0, m_star):
    """Decay length sqrt(hbar^2 / (2 m* (V0_eff - E0))) of the sub-barrier wavefunction."""
    if not V0_eff > E0:
        raise AboveBarrierError(
            f"incident energy {E0!r} J is not below the barrier {V0_eff!r} J")
    return math.sqrt(_C.hbar ** 2 / (2 * m_star * (V0_eff - E0)))


def wavefunction_coeffs(state, a, zeta):
    """Coefficients (C1, C2) of cosh(x/zeta) and sinh(x/zeta) matching both electrodes."""
    if not (a > 0 and zeta > 0):
        raise DomainError("a and zeta must be positive")
    psi1 = math.sqrt(state.n1) * cmath.exp(1j * state.theta1)
    psi2 = math.sqrt(state.n2) * cmath.exp(1j * state.theta2)
    C1 = (psi1 + psi2) / (2 * math.cosh(a / zeta))
    C2 = -(psi1 - psi2) / (2 * math.sinh(a / zeta))
    return C1, C2


def current_density_from_coeffs(state, a, zeta, m_star, convention="pair"):
    """Probability-current route, (q hbar / (m zeta)) Im(C1* C2).

    The carriers are negatively charged, so q = -|q|; the result is the
    electric current density flowing from electrode 1 to electrode 2.
    """
    charge, mass = carrier_constants(convention, m_star)
    C1, C2 = wavefunction_coeffs(state, a, zeta)
    return -charge * _C.hbar / (mass * zeta) * (C1.conjugate() * C2).imag


def log_critical_current_density(state, a, zeta, m_star, convention="pair", literal_half=False):
    if not (a > 0 and zeta > 0):
        raise DomainError("a and zeta must be positive")
    charge, mass = carrier_constants(convention, m_star)
    log_pref = math.log(charge * _C.hbar * math.sqrt(state.n1 * state.n2) / (mass * zeta))
    if literal_half:
        log_pref -= math.log(2.0)
    return log_pref - log_sinh(2 * a / zeta)


def critical_current_density(state, a, zeta, m_star, convention="pair", literal_half=False):
    """Maximum supercurrent density over the phase difference (A/m^2).

    Evaluated in log space; flushes to 0.0 for barriers so thick the value
    underflows a double.
    """
    log_jc = log_critical_current_density(state, a, zeta, m_star, convention, literal_half)
    return 0.0 if log_jc < _LOG_TINY else math.exp(log_jc)


def supercurrent_density(state, a, zeta, m_star, convention="pair", literal_half=False):
    """J_C * sin(theta1 - theta2)."""
    jc = critical_current_density(state, a, zeta, m_star, convention, literal_half)
    return jc * math.sin(state.theta1 - state.theta2)


def critical_current(device, V_GS, E0=0.0):
    """Critical current J_C(V_GS)*area, clamped at the material's J_C_max*area."""
    zeta = device.decay_length(V_GS, E0)
    log_jc = device.log_critical_current_density(zeta)
    log_ic = log_jc + math.log(device.area)
    underflow = log_ic < _LOG_TINY
    unclamped = 0.0 if underflow else math.exp(log_ic)
    limit = device.max_critical_current
    clamped = unclamped > limit
    if underflow:
        warnings.warn(f"critical current underflows at V_GS = {V_GS!r} V", ModelWarning,
                      stacklevel=2)
    return CriticalCurrent(min(unclamped, limit), unclamped, zeta, clamped, underflow, log_ic)


def gate_for_critical_current(device, I_target, V_lo, V_hi, E0=0.0, tol=None):
    """Gate voltage at which the unclamped critical current equals ``I_target``."""
    log_target = math.log(I_target)

    def residual(v):
        return critical_current(device, v, E0).log_unclamped - log_target

    return find_root(residual, V_lo, V_hi, tol or Tolerance(abs_tol=1e-14, rel_tol=1e-15,
                                                             max_depth=80))


def normal_resistance(I_C, tau_n):
    """R_n = Phi0 / (2 pi tau_n I_C); I_C * R_n is independent of the gate."""
    if not (I_C > 0 and tau_n > 0):
        raise DomainError(f"I_C and tau_n must be positive, got {I_C!r}, {tau_n!r}")
    return _C.Phi0 / (2 * math.pi * tau_n * I_C)


def normal_conductance(omega, I_C, tau_n):
    """Single-pole normal-electron conductance (2 pi I_C / Phi0) / (j omega + 1/tau_n)."""
    if omega < 0:
        raise DomainError(f"omega must be >= 0, got {omega!r}")
    return (2 * math.pi * I_C / _C.Phi0) / complex(1 / tau_n, omega)


def josephson_inductance(I_C, phi=0.0):
    """Phi0 / (2 pi I_C cos(phi))."""
    return _C.Phi0 / (2 * math.pi * I_C * math.cos(phi))


def gap_voltage(Delta_SC, gap_charge="e"):
    return 2 * Delta_SC / gap_charge_value(gap_charge)


def iv_voltage(I, I_C, R_n, Delta_SC, gap_charge="e"):
    """Quasi-static I-V law: zero voltage up to I_C, then 2*Delta/e + (I - I_C)*R_n."""
    if I < 0:
        raise DomainError(f"bias current must be >= 0, got {I!r}")
    if I <= I_C:
        return QPoint(I, 0.0, Branch.SUPERCURRENT)
    return QPoint(I, gap_voltage(Delta_SC, gap_charge) + (I - I_C) * R_n, Branch.NORMAL)


def iv_sweep(device, V_GS, I_max, n_points, E0=0.0):
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if not I_max > 0:
        raise ValueError("I_max must be positive")
    I_C = critical_current(device, V_GS, E0).value
    R_n = normal_resistance(I_C, device.sc.tau_n)
    currents = np.linspace(0.0, I_max, n_points)
    points = [iv_voltage(float(i), I_C, R_n, device.sc.Delta_SC, device.gap_charge)
              for i in currents]
    return IVCurve(
        currents=currents,
        voltages=np.array([p.voltage for p in points]),
        branches=[p.branch for p in points],
        I_C=I_C, R_n=R_n, V_gap=device.gap_voltage, V_GS=V_GS,
    )


def junction_capacitance(eps_r, area, d):
    """Parallel-plate capacitance eps_r*eps0*area/d."""
    if eps_r <= 0 or area < 0 or d <= 0:
        raise DomainError("eps_r and d must be positive and area non-negative")
    return eps_r * _C.eps0 * area / d
