"""Behavioural LNA and H-bridge PA analyses built on :mod:`sssim.junction`.

The LNA is a single current-biased junction whose gate moves the knee of the
I-V curve along a horizontal load line. The PA is a four-junction H-bridge
that steers a bias current through the load in either polarity.
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .constants import CONSTANTS, ModelWarning
from .errors import BranchViolationError, DomainError, NumericalError, SteeringError
from .junction import (
    JunctionDevice,
    carrier_constants,
    critical_current,
    iv_voltage,
    junction_capacitance,
    normal_resistance,
)
from .numerics import log_sinh, relative_error

_C = CONSTANTS


@dataclass(frozen=True)
class Diagnostic:
    """One applied approximation: exact vs approximate value of the same quantity."""

    name: str
    description: str
    exact: float
    approx: float
    relative_error: float

    @classmethod
    def compare(cls, name, description, exact, approx):
        return cls(name, description, exact, approx, relative_error(approx, exact))


@dataclass
class AmplifierResult:
    gain_exact: Optional[float] = None
    gain_closed_form: Optional[float] = None
    f_3db: Optional[float] = None
    P_out: Optional[float] = None
    efficiency_note: Optional["EfficiencyComparison"] = None
    diagnostics: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


# --------------------------------------------------------------------------- LNA


@dataclass(frozen=True)
class LNAConfig:
    device: JunctionDevice
    I_B: float
    V_Ai: float
    V_Bi: float
    E0: float = 0.0

    def __post_init__(self):
        if not self.I_B > 0:
            raise DomainError(f"bias current must be positive, got {self.I_B!r}")


@dataclass(frozen=True)
class GammaRn:
    value: float
    zeta_avg: float
    log_value: float
    components: dict


def loadline_qpoint(device, V_GS, I_bias, E0=0.0):
    """Intersection of the horizontal load line I = I_bias with the device curve."""
    if I_bias < 0:
        raise DomainError(f"bias current must be >= 0, got {I_bias!r}")
    I_C = critical_current(device, V_GS, E0).value
    R_n = normal_resistance(I_C, device.sc.tau_n)
    return iv_voltage(I_bias, I_C, R_n, device.sc.Delta_SC, device.gap_charge)


def _log_rn_prefactor(device):
    # R_n = prefactor * zeta * sinh(2a/zeta); follows from I_C*R_n = Phi0/(2 pi tau_n)
    charge, mass = carrier_constants(device.convention, device.barrier.m_star)
    n1, n2 = device.state.n1, device.state.n2
    denom = 2 * math.pi * device.sc.tau_n * charge * _C.hbar * math.sqrt(n1 * n2) * device.area
    if device.literal_half:
        denom /= 2
    return math.log(_C.Phi0 * mass / denom)


def _sqrt_hbar2_over_2m_volt(device):
    # sqrt(hbar^2/(2 m*)) with the barrier counted in volts, units m*V^(1/2)
    return math.sqrt(_C.hbar ** 2 / (2 * device.barrier.m_star * _C.e))


def gamma_rn(device, zeta1, zeta2):
    """Gain coefficient Gamma_Rn with zeta_avg the rms of the two decay lengths.

    The prefactor is the one that makes R_n = prefactor * zeta * sinh(2a/zeta)
    exactly for ``device``; the square-root term is expressed per volt^(1/2)
    so that the barrier height can be given in volts.
    """
    if not (zeta1 > 0 and zeta2 > 0):
        raise DomainError("decay lengths must be positive")
    zeta_avg = math.sqrt(0.5 * (zeta1 ** 2 + zeta2 ** 2))
    log_pref = _log_rn_prefactor(device)
    root = _sqrt_hbar2_over_2m_volt(device)
    log_value = log_pref + log_sinh(2 * device.a / zeta_avg) + math.log(root)
    charge, mass = carrier_constants(device.convention, device.barrier.m_star)
    components = {
        "Phi0": _C.Phi0,
        "m": mass,
        "charge": charge,
        "tau_n": device.sc.tau_n,
        "sqrt_n1n2": math.sqrt(device.state.n1 * device.state.n2),
        "A_jn": device.area,
        "a": device.a,
        "sqrt_hbar2_over_2m_volt": root,
    }
    return GammaRn(math.exp(log_value), zeta_avg, log_value, components)


def _level(cfg, V_GS):
    cc = critical_current(cfg.device, V_GS, cfg.E0)
    if not cfg.I_B > cc.value:
        raise BranchViolationError(
            f"bias {cfg.I_B!r} A does not exceed I_C = {cc.value!r} A at V_GS = {V_GS!r} V; "
            "the Q-point is on the supercurrent branch", critical_current=cc.value)
    R_n = normal_resistance(cc.value, cfg.device.sc.tau_n)
    q = iv_voltage(cfg.I_B, cc.value, R_n, cfg.device.sc.Delta_SC, cfg.device.gap_charge)
    return cc, R_n, q


def lna_gain_exact(cfg):
    """Two-point voltage gain (V_A - V_B)/(V_Ai - V_Bi) from the full device chain."""
    cc1, R1, qa = _level(cfg, cfg.V_Ai)
    cc2, R2, qb = _level(cfg, cfg.V_Bi)
    delta_out = qa.voltage - qb.voltage
    identity = cfg.I_B * (R1 - R2)
    slack = 1e-10 * max(abs(identity), abs(delta_out)) + 64 * math.ulp(max(qa.voltage, qb.voltage))
    if abs(delta_out - identity) > slack:
        raise NumericalError(
            f"V_A - V_B = {delta_out!r} disagrees with I_B (R_n1 - R_n2) = {identity!r}")
    delta_in = cfg.V_Ai - cfg.V_Bi
    gain = delta_out / delta_in if delta_in != 0 else float("nan")
    return AmplifierResult(
        gain_exact=gain,
        details={
            "V_A": qa.voltage, "V_B": qb.voltage, "delta_V_out": delta_out,
            "I_C1": cc1.value, "I_C2": cc2.value, "R_n1": R1, "R_n2": R2,
            "zeta1": cc1.zeta, "zeta2": cc2.zeta, "clamped": cc1.clamped or cc2.clamped,
        },
    )


def _zeta_sinh_difference(a, z1, z2):
    # z1 sinh(2a/z1) - z2 sinh(2a/z2) without cancellation
    l1 = math.log(z1) + log_sinh(2 * a / z1)
    l2 = math.log(z2) + log_sinh(2 * a / z2)
    return math.exp(l2) * math.expm1(l1 - l2)


def lna_gain_closed_form(cfg):
    """Closed-form gain I_B * Gamma_Rn / (2 V0^(3/2)) with per-step error diagnostics.

    V0 is the zero-drive barrier measured from E0, in volts. The gate lever
    multiplies the result (unity reproduces the textbook form). The exact
    two-point chain is evaluated alongside and each stacked approximation is
    reported against it.
    """
    exact = lna_gain_exact(cfg)
    dev = cfg.device
    eta = dev.barrier.gate_lever
    z1, z2 = exact.details["zeta1"], exact.details["zeta2"]
    g = gamma_rn(dev, z1, z2)
    V0 = (dev.barrier.V0_base - cfg.E0) / _C.e
    gain_cf = eta * cfg.I_B * g.value / (2 * V0 ** 1.5)

    diags = []
    x_avg = 2 * dev.a / g.zeta_avg
    if x_avg < 5:
        warnings.warn(f"2a/zeta_avg = {x_avg:.3g} < 5; the thick-barrier factoring is unjustified",
                      ModelWarning, stacklevel=2)
        diags.append(Diagnostic("thick_barrier_precondition",
                                f"2a/zeta_avg = {x_avg:.4g} is below 5", 5.0, x_avg,
                                relative_error(x_avg, 5.0)))
    if cfg.V_Ai != cfg.V_Bi:
        swing = eta * (cfg.V_Ai - cfg.V_Bi)
        diags.append(Diagnostic.compare(
            "sinh_factoring",
            "zeta1 sinh(2a/zeta1) - zeta2 sinh(2a/zeta2) ~ sinh(2a/zeta_avg) (zeta1 - zeta2)",
            _zeta_sinh_difference(dev.a, z1, z2),
            math.sinh(min(x_avg, 700.0)) * (z1 - z2)))
        root = _sqrt_hbar2_over_2m_volt(dev)
        inv_a = 1 / math.sqrt(V0 - eta * cfg.V_Ai)
        inv_b = 1 / math.sqrt(V0 - eta * cfg.V_Bi)
        diags.append(Diagnostic.compare(
            "sqrt_substitution",
            "zeta1 - zeta2 = sqrt(hbar^2/2m*) (1/sqrt(V0 - V_Ai) - 1/sqrt(V0 - V_Bi))",
            z1 - z2, root * (inv_a - inv_b)))
        diags.append(Diagnostic.compare(
            "binomial_expansion",
            "1/sqrt(V0 - V_Ai) - 1/sqrt(V0 - V_Bi) ~ (V_Ai - V_Bi) / (2 V0^(3/2))",
            inv_a - inv_b, swing / (2 * V0 ** 1.5)))
        diags.append(Diagnostic.compare(
            "binomial_expansion_literal",
            "same difference with the expansion written as (1 + V/V0), i.e. no factor 1/2",
            inv_a - inv_b, swing / V0 ** 1.5))
        diags.append(Diagnostic.compare(
            "overall_gain", "closed-form gain vs exact two-point gain",
            exact.gain_exact, gain_cf))

    exact.gain_closed_form = gain_cf
    exact.diagnostics = diags
    exact.details.update({"Gamma_Rn": g.value, "zeta_avg": g.zeta_avg, "V0_volts": V0,
                          "two_a_over_zeta_avg": x_avg})
    return exact


# ---------------------------------------------------------------------------- PA


class Polarity(str, Enum):
    PLUS = "plus"
    ZERO = "zero"
    MINUS = "minus"


class PAState(NamedTuple):
    V_load: float
    I_load: float
    P_load: float


@dataclass(frozen=True)
class PAConfig:
    """H-bridge: devices ordered (top-left, top-right, bottom-left, bottom-right)."""

    devices: tuple
    Z_load: float
    I_bias: float
    gate_high: float
    gate_low: float
    E0: float = 0.0

    def __post_init__(self):
        if len(self.devices) != 4:
            raise DomainError("an H-bridge needs exactly four devices")
        if not (self.Z_load > 0 and self.I_bias > 0):
            raise DomainError("Z_load and I_bias must be positive")
        for dev in self.devices:
            unclamped = critical_current(dev, self.gate_high, self.E0).unclamped
            if not unclamped > self.I_bias:
                raise SteeringError(
                    f"device I_C at gate_high ({unclamped!r} A) does not exceed "
                    f"I_bias = {self.I_bias!r} A")

    @classmethod
    def uniform(cls, device, Z_load, I_bias, gate_high, gate_low, E0=0.0):
        return cls((device,) * 4, Z_load, I_bias, gate_high, gate_low, E0)


_ON_PAIRS = {Polarity.PLUS: (1, 2), Polarity.MINUS: (0, 3)}


def pa_output(cfg, polarity):
    """Load voltage, current and power for one bridge state.

    PLUS drives the bias through top-right, the load and bottom-left; MINUS
    uses the other diagonal. ON devices carry I <= I_C and drop no voltage.
    """
    polarity = Polarity(polarity)
    I_C = [critical_current(d, cfg.gate_high, cfg.E0).value for d in cfg.devices]
    if polarity is Polarity.ZERO:
        if min(I_C) < cfg.I_bias / 2:
            raise SteeringError(
                f"balanced state needs I_C >= I_bias/2 in every arm, got min {min(I_C)!r} A")
        return PAState(0.0, 0.0, 0.0)
    on = _ON_PAIRS[polarity]
    off = tuple(i for i in range(4) if i not in on)
    for i in on:
        if I_C[i] < cfg.I_bias:
            raise SteeringError(
                f"nominally-ON device {i} has I_C = {I_C[i]!r} A < I_bias = {cfg.I_bias!r} A")
    for i in off:
        I_off = critical_current(cfg.devices[i], cfg.gate_low, cfg.E0).value
        if I_off >= cfg.I_bias:
            raise SteeringError(
                f"nominally-OFF device {i} still carries I_C = {I_off!r} A >= I_bias at gate_low")
    sign = 1.0 if polarity is Polarity.PLUS else -1.0
    I_load = sign * cfg.I_bias
    V_load = I_load * cfg.Z_load
    return PAState(V_load, I_load, V_load * I_load)


def pa_bandwidth(cfg):
    """f_3dB = 1/(2 pi Z_load C_jn/2): two junction capacitances in series with the load."""
    caps = [d.capacitance for d in cfg.devices]
    if max(caps) != min(caps):
        warnings.warn("bridge devices differ; using the largest junction capacitance",
                      ModelWarning, stacklevel=2)
    tau_rc = cfg.Z_load * max(caps) / 2
    return 1 / (2 * math.pi * tau_rc)


@dataclass(frozen=True)
class EfficiencyComparison:
    P_load: float
    P_loss_mosfet: float
    P_loss_junction: float
    efficiency_mosfet: float
    efficiency_junction: float


def pa_efficiency_advantage(cfg, R_on_mosfet):
    """Conduction loss 2 R_on I^2 of a MOSFET bridge vs the zero-drop junction bridge."""
    if R_on_mosfet < 0:
        raise DomainError("R_on must be >= 0")
    P_load = cfg.I_bias ** 2 * cfg.Z_load
    P_loss = 2 * R_on_mosfet * cfg.I_bias ** 2
    return EfficiencyComparison(P_load, P_loss, 0.0, P_load / (P_load + P_loss), 1.0)


def pa_analysis(cfg, R_on_mosfet=0.0):
    states = {p.value: pa_output(cfg, p) for p in Polarity}
    return AmplifierResult(
        f_3db=pa_bandwidth(cfg),
        P_out=states["plus"].P_load,
        efficiency_note=pa_efficiency_advantage(cfg, R_on_mosfet),
        details={"states": states, "C_jn": max(d.capacitance for d in cfg.devices)},
    )


# ------------------------------------------------------- power/frequency trade-off


class TradeoffPoint(NamedTuple):
    P_dbm: float
    P_watt: float
    current: float
    area: float
    C_jn: float
    f_3db: float


def dbm_to_watt(p_dbm):
    return 1e-3 * 10 ** (p_dbm / 10)


def watt_to_dbm(p_watt):
    return 10 * math.log10(p_watt / 1e-3)


def required_current(P_watt, Z_load, convention="peak"):
    """Switched current for a given load power.

    ``peak``: square-wave drive, P = I^2 Z. ``rms``: sinusoidal, P = I^2 Z / 2.
    """
    if convention == "peak":
        return math.sqrt(P_watt / Z_load)
    if convention == "rms":
        return math.sqrt(2 * P_watt / Z_load)
    raise ValueError(f"power convention must be 'peak' or 'rms', got {convention!r}")


def pa_power_frequency_tradeoff(powers_dbm, Z_load, sc, barrier, convention="peak"):
    """Smallest junction area (at J_C_max) and resulting bandwidth per target power."""
    points = []
    for p_dbm in powers_dbm:
        P = dbm_to_watt(p_dbm)
        current = required_current(P, Z_load, convention)
        area = current / sc.J_C_max
        C = junction_capacitance(barrier.eps_r, area, barrier.d)
        points.append(TradeoffPoint(p_dbm, P, current, area, C, 1 / (math.pi * Z_load * C)))
    return points


def tradeoff_at(P_dbm, Z_load, sc, barrier, convention="peak"):
    return pa_power_frequency_tradeoff([P_dbm], Z_load, sc, barrier, convention)[0]
