"""Tunnelling-noise carrier count.

The number of pairs available to tunnel is an energy integral of
(density of states) x (Bose-Einstein occupancy) x (barrier transmission)
over a narrow window above eps_F + Delta_SC. This module evaluates it by
adaptive quadrature and alongside it the chain of closed-form reductions
(constant occupancy, large-argument transmission, approximate antiderivative),
reporting how far each step moves the answer.

Energies are absolute (measured from the band bottom), so the barrier height
V0 here must exceed eps_F.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

from .constants import CONSTANTS, BarrierParams, ModelWarning, SuperconductorParams, critical_frequency
from .errors import ConvergenceError, DomainError, NegativeBracketError
from .numerics import Tolerance, integrate, log_sinh, relative_error

_C = CONSTANTS

DEFAULT_TOLERANCE = Tolerance(abs_tol=1e-30, rel_tol=1e-9, max_depth=60)
LITERAL_EXPONENT = 200.0


@dataclass(frozen=True)
class NoiseParams:
    """Inputs of the carrier count.

    ``window`` is the energy band (J) above eps_F + Delta_SC holding the
    tunnelling pairs, ``g`` the level degeneracy there.
    """

    sc: SuperconductorParams
    barrier: BarrierParams
    g: float = 1.0
    window: float = 3.313e-23
    f_min: float = 1e9
    T: float = 4.2
    directional_factor: bool = False
    literal_exponent: bool = False

    def __post_init__(self):
        if not self.window > 0:
            raise DomainError(f"energy window must be positive, got {self.window!r}")
        if not self.f_min > 0:
            raise DomainError(f"f_min must be positive, got {self.f_min!r}")
        if not 0 < self.T < self.sc.T_C:
            raise DomainError(f"T = {self.T!r} K must lie in (0, T_C = {self.sc.T_C!r} K)")
        if not self.g > 0:
            raise DomainError(f"degeneracy must be positive, got {self.g!r}")
        if not self.upper < self.V0:
            raise DomainError(
                f"window top {self.upper / _C.e:.6g} eV must lie below the barrier "
                f"V0 = {self.V0 / _C.e:.6g} eV")

    @property
    def V0(self):
        return self.barrier.V0_base

    @property
    def L(self):
        return self.barrier.d

    @property
    def lower(self):
        return self.sc.eps_F + self.sc.Delta_SC

    @property
    def upper(self):
        return self.lower + self.window

    @property
    def occupancy_exponent(self):
        if self.literal_exponent:
            return LITERAL_EXPONENT
        return critical_frequency(self.sc) / self.f_min

    @property
    def direction_multiplier(self):
        return 1 / 3 if self.directional_factor else 1.0


def _sqrt_gap(eps, delta):
    return math.sqrt((eps - delta) * (eps + delta))


def dos_sc(eps, p):
    """Quasiparticle density of states 2 rho_F eps / sqrt(eps^2 - Delta^2)."""
    delta = p.sc.Delta_SC
    if not eps > delta:
        raise DomainError(f"density of states needs eps > Delta_SC, got {eps!r} J")
    # the ratio is >= 1 exactly; rounding can dip an ulp below for eps >> delta
    return 2 * p.sc.rho_F * max(1.0, eps / _sqrt_gap(eps, delta))


def _inv_expm1(x):
    return math.exp(-x) if x > 700 else 1 / math.expm1(x)


def be_occupancy(eps, p, mode="exact"):
    """Bose-Einstein occupancy.

    ``exact``: g / (exp((eps - eps_F)/k_B T) - 1).
    ``overestimate``: the constant 1/(exp(f_c/f_min) - 1) (or exp(200)
    with ``literal_exponent``); the degeneracy stays in the prefactor.
    """
    if mode == "exact":
        x = (eps - p.sc.eps_F) / (_C.k_B * p.T)
        if not x > 0:
            raise DomainError(f"exact occupancy needs eps > eps_F, got {eps!r} J")
        return p.g * _inv_expm1(x)
    if mode == "overestimate":
        return _inv_expm1(p.occupancy_exponent)
    raise ValueError(f"unknown occupancy mode {mode!r}")


def sinh_argument(eps, p):
    """beta = (L/hbar) sqrt(2 m* (V0 - eps))."""
    return p.L / _C.hbar * math.sqrt(2 * p.barrier.m_star * (p.V0 - eps))


def transmission_exact(eps, p):
    """Rectangular-barrier transmission for 0 < eps < V0."""
    V0 = p.V0
    if not 0 < eps < V0:
        raise DomainError(f"transmission needs 0 < eps < V0, got eps = {eps!r} J")
    beta = sinh_argument(eps, p)
    if beta == 0:
        return 1.0
    log_pref = 2 * math.log(V0) - math.log(4 * eps) - math.log(V0 - eps)
    log_x = log_pref + 2 * log_sinh(beta)
    # 1/(1 + e^log_x)
    if log_x > 0:
        return math.exp(-log_x - math.log1p(math.exp(-log_x)))
    return 1 / (1 + math.exp(log_x))


class TransmissionApprox(NamedTuple):
    literal: float
    reference: float
    beta: float


def transmission_approx(eps, p):
    """Large-beta forms of the transmission.

    ``literal`` is 16 (eps - V0)/V0 as written (negative below the barrier and
    missing the tunnelling exponential); ``reference`` is the standard
    asymptote 16 (eps/V0)(1 - eps/V0) exp(-2 beta).
    """
    V0 = p.V0
    if not 0 < eps < V0:
        raise DomainError(f"transmission needs 0 < eps < V0, got eps = {eps!r} J")
    beta = sinh_argument(eps, p)
    if beta < 5:
        warnings.warn(f"sinh argument {beta:.3g} < 5; large-argument form is inaccurate",
                      ModelWarning, stacklevel=2)
    r = eps / V0
    return TransmissionApprox(16 * (eps - V0) / V0, 16 * r * (1 - r) * math.exp(-2 * beta), beta)


def _window_integral(h, p, tol):
    # integrate h over the window in the unit variable u, eps = lower + window*u
    lo, w = p.lower, p.window
    res = integrate(lambda u: h(lo + w * u), 0.0, 1.0, tol)
    return res.scaled(w)


def _require_converged(res, what):
    if not res.converged:
        raise ConvergenceError(f"{what} did not converge", value=res.value,
                               error_estimate=res.error_estimate)
    return res


@dataclass(frozen=True)
class CapacityResult:
    closed_form: float
    quadrature: float
    error_estimate: float

    @property
    def relative_error(self):
        return relative_error(self.closed_form, self.quadrature)


def n1_star_capacity(p, tol=DEFAULT_TOLERANCE):
    """Pairs that fit in the window with constant degeneracy.

    Closed form 2 rho_F g (window/Delta_SC) [1 - (Delta_SC/(eps_F + Delta_SC))^2 / 2]
    as written, next to the direct quadrature of 2 rho_F g eps/sqrt(eps^2 - Delta^2).
    """
    sc = p.sc
    closed = (2 * sc.rho_F * p.g * (p.window / sc.Delta_SC)
              * (1 - 0.5 * (sc.Delta_SC / (sc.eps_F + sc.Delta_SC)) ** 2))
    delta = sc.Delta_SC
    res = _require_converged(
        _window_integral(lambda e: e / _sqrt_gap(e, delta), p, tol), "capacity quadrature")
    factor = 2 * sc.rho_F * p.g
    return CapacityResult(closed, res.value * factor, res.error_estimate * factor)


def _prefactor(p):
    return 2 * p.sc.rho_F * p.g * be_occupancy(0.0, p, "overestimate") * p.direction_multiplier


def noise_carriers_quadrature(p, transmission="exact", tol=DEFAULT_TOLERANCE):
    """Carrier count by quadrature with the constant (overestimated) occupancy.

    ``transmission`` selects the exact barrier transmission or the literal
    large-argument form 16 (eps - V0)/V0.
    """
    delta, V0 = p.sc.Delta_SC, p.V0
    if transmission == "exact":
        def h(e):
            return e / _sqrt_gap(e, delta) * transmission_exact(e, p)
    elif transmission == "literal":
        def h(e):
            return e / _sqrt_gap(e, delta) * 16 * (e - V0) / V0
    else:
        raise ValueError(f"transmission must be 'exact' or 'literal', got {transmission!r}")
    res = _require_converged(_window_integral(h, p, tol), "noise-carrier quadrature")
    return res.scaled(_prefactor(p))


def closed_form_bracket(p):
    """Approximate integral (window/2) sqrt((eps_F + Delta)^2 - Delta^2) - Delta^2/3."""
    sc = p.sc
    top = sc.eps_F + sc.Delta_SC
    return 0.5 * p.window * _sqrt_gap(top, sc.Delta_SC) - sc.Delta_SC ** 2 / 3


def _closed_prefactor(p):
    return 16 / p.V0 * _prefactor(p)


def noise_carriers_closed_form(p):
    """Closed-form carrier count 32 rho_F g / (V0 (e^{f_c/f_min} - 1)) x bracket."""
    sc = p.sc
    if not p.V0 > 10 * p.window:
        warnings.warn("V0 is not much larger than the energy window", ModelWarning, stacklevel=2)
    if not sc.eps_F + sc.Delta_SC > p.window:
        warnings.warn("eps_F + Delta_SC does not exceed the energy window", ModelWarning,
                      stacklevel=2)
    bracket = closed_form_bracket(p)
    if bracket < 0:
        raise NegativeBracketError(
            f"approximate integral is negative ({bracket!r} J^2); parameters are outside "
            "the regime of the closed form")
    return _closed_prefactor(p) * bracket


def literal_antiderivative(eps, p):
    """((eps - V0)/2) sqrt(eps^2 - Delta^2) - (Delta^2/3) ln(eps + sqrt(eps^2 - Delta^2))."""
    delta = p.sc.Delta_SC
    root = _sqrt_gap(eps, delta)
    return 0.5 * (eps - p.V0) * root - delta ** 2 / 3 * math.log(eps + root)


def standard_antiderivative(eps, p):
    """Antiderivative of eps (eps - V0)/sqrt(eps^2 - Delta^2)."""
    delta = p.sc.Delta_SC
    root = _sqrt_gap(eps, delta)
    return (0.5 * eps - p.V0) * root + 0.5 * delta ** 2 * math.log(eps + root)


def literal_integrand(eps, p):
    """eps (eps - V0) / sqrt(eps^2 - Delta^2)."""
    return eps * (eps - p.V0) / _sqrt_gap(eps, p.sc.Delta_SC)


def _five_point_derivative(F, x, h):
    return (F(x - 2 * h) - 8 * F(x - h) + 8 * F(x + h) - F(x + 2 * h)) / (12 * h)


@dataclass(frozen=True)
class AntiderivativeCheck:
    """Numerical derivative of an antiderivative vs the integrand it should produce."""

    points: tuple
    max_relative_error: float
    control_max_relative_error: float
    rel_tol: float
    literal_log_coefficient: float = 1 / 3
    standard_log_coefficient: float = 1 / 2

    @property
    def passed(self):
        return self.max_relative_error <= self.rel_tol

    @property
    def control_passed(self):
        return self.control_max_relative_error <= self.rel_tol


def antiderivative_check(p, n_points=20, rel_tol=1e-6):
    """Differentiate the approximate antiderivative at ``n_points`` window points.

    The standard antiderivative goes through the same check as a control on
    the differentiation itself.
    """
    lo, w = p.lower, p.window
    h = 1e-4 * lo
    points = tuple(lo + w * (k + 0.5) / n_points for k in range(n_points))
    errs, ctrl = [], []
    for x in points:
        target = literal_integrand(x, p)
        errs.append(relative_error(_five_point_derivative(lambda e: literal_antiderivative(e, p), x, h), target))
        ctrl.append(relative_error(_five_point_derivative(lambda e: standard_antiderivative(e, p), x, h), target))
    return AntiderivativeCheck(points, max(errs), max(ctrl), rel_tol)


@dataclass
class NoiseReport:
    n_star_quadrature: float
    n_star_closed_form: float
    n1_star_capacity: float
    directional_fraction_applied: bool
    relative_error: float
    quadrature_abs_tol: float
    quadrature_rel_tol: float
    quadrature_error_estimate: float = 0.0
    n1_star_capacity_quadrature: float = 0.0
    steps: dict = field(default_factory=dict)
    antiderivative: AntiderivativeCheck = None


def noise_report(p, tol=DEFAULT_TOLERANCE):
    """Run every route and collect the step-by-step comparison.

    Steps (all in carriers, same prefactor unless noted):

    * ``literal_integrand_quadrature``: quadrature with transmission 16 (eps - V0)/V0
    * ``standard_antiderivative``: the same integral in closed form (must agree)
    * ``literal_antiderivative``: the approximate antiderivative at the limits
    * ``closed_form``: after dropping terms in the final bracket
    """
    exact = noise_carriers_quadrature(p, "exact", tol)
    closed = noise_carriers_closed_form(p)
    cap = n1_star_capacity(p, tol)
    literal_quad = noise_carriers_quadrature(p, "literal", tol)
    pref = _closed_prefactor(p)
    std = pref * (standard_antiderivative(p.upper, p) - standard_antiderivative(p.lower, p))
    lit = pref * (literal_antiderivative(p.upper, p) - literal_antiderivative(p.lower, p))
    mid = 0.5 * (p.lower + p.upper)
    t_exact = transmission_exact(mid, p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        t_approx = transmission_approx(mid, p)
    steps = {
        "literal_integrand_quadrature": literal_quad.value,
        "literal_integrand_quadrature_error": literal_quad.error_estimate,
        "standard_antiderivative": std,
        "prefactor_identity_error": relative_error(literal_quad.value, std),
        "literal_antiderivative": lit,
        "antiderivative_step_error": relative_error(lit, std),
        "closed_form": closed,
        "bracket_step_error": relative_error(closed, lit),
        "transmission_exact_mid": t_exact,
        "transmission_literal_mid": t_approx.literal,
        "transmission_reference_mid": t_approx.reference,
        "beta_mid": t_approx.beta,
        "occupancy_exponent": p.occupancy_exponent,
    }
    return NoiseReport(
        n_star_quadrature=exact.value,
        n_star_closed_form=closed,
        n1_star_capacity=cap.closed_form,
        directional_fraction_applied=p.directional_factor,
        relative_error=abs(exact.value - closed) / max(abs(exact.value), 1e-300),
        quadrature_abs_tol=tol.abs_tol,
        quadrature_rel_tol=tol.rel_tol,
        quadrature_error_estimate=exact.error_estimate,
        n1_star_capacity_quadrature=cap.quadrature,
        steps=steps,
        antiderivative=antiderivative_check(p),
    )
