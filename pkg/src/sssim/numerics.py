"""Shared numerical kernels: adaptive quadrature, root finding, log-space sinh."""

import heapq
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import ConvergenceError, NoBracketError, NonFiniteIntegrandError

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss weights for the odd-indexed Kronrod nodes _XGK[1], [3], [5], [7].
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

_MAX_EVALUATIONS = 500_000


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if not 1 <= self.max_depth <= 80:
            raise ValueError(f"max_depth must lie in [1, 80], got {self.max_depth}")

    def target(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def scaled(self, factor):
        """Result multiplied by a constant prefactor."""
        return QuadratureResult(self.value * factor, self.error_estimate * abs(factor),
                                self.evaluations, self.converged)


def _kronrod_panel(f, lo, hi):
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    kronrod = 0.0
    gauss = 0.0
    for i, (x, wk) in enumerate(zip(_XGK, _WGK)):
        if x == 0.0:
            points = (center,)
        else:
            points = (center - half * x, center + half * x)
        for p in points:
            fx = f(p)
            if not math.isfinite(fx):
                raise NonFiniteIntegrandError(f"integrand is {fx!r} at x = {p!r}", location=p)
            kronrod += wk * fx
            if i % 2 == 1:
                gauss += _WG[i // 2] * fx
    return kronrod * half, abs(kronrod - gauss) * half


def integrate(f, lo, hi, tol=None):
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over [lo, hi].

    The panel with the largest |K15 - G7| estimate is bisected until the summed
    estimate satisfies ``tol`` or no panel can be split further. Panels are
    processed in a fixed order, so the result is bit-reproducible.

    Returns
    -------
    QuadratureResult
        ``converged`` is False when the depth limit stopped refinement; the
        value is then the best available estimate.
    """
    tol = tol or Tolerance()
    if not lo < hi:
        raise ValueError(f"integration limits must satisfy lo < hi, got [{lo!r}, {hi!r}]")

    value, error = _kronrod_panel(f, lo, hi)
    evaluations = 15
    # heap entries: (-error, sequence, lo, hi, value, error, depth)
    heap = [(-error, 0, lo, hi, value, error, 0)]
    frozen_value = 0.0
    frozen_error = 0.0
    seq = 1
    total_value, total_error = value, error

    while total_error > tol.target(total_value):
        if not heap or evaluations >= _MAX_EVALUATIONS:
            break
        _, _, a, b, v, err, depth = heapq.heappop(heap)
        if depth >= tol.max_depth:
            frozen_value += v
            frozen_error += err
            continue
        mid = 0.5 * (a + b)
        v1, e1 = _kronrod_panel(f, a, mid)
        v2, e2 = _kronrod_panel(f, mid, b)
        evaluations += 30
        heapq.heappush(heap, (-e1, seq, a, mid, v1, e1, depth + 1))
        heapq.heappush(heap, (-e2, seq + 1, mid, b, v2, e2, depth + 1))
        seq += 2
        # re-sum from scratch in panel order to keep the total free of drift
        ordered = sorted(heap, key=lambda item: item[2])
        total_value = frozen_value + math.fsum(item[4] for item in ordered)
        total_error = frozen_error + math.fsum(item[5] for item in ordered)

    converged = total_error <= tol.target(total_value)
    return QuadratureResult(total_value, total_error, evaluations, converged)


def log_sinh(x):
    """ln(sinh(x)) for x > 0, without overflow for large x."""
    if not x > 0:
        raise ValueError(f"log_sinh needs x > 0, got {x!r}")
    if x < 20:
        return math.log(math.sinh(x))
    return x - math.log(2.0) + math.log1p(-math.exp(-2 * x))


def find_root(f, lo, hi, tol=None):
    """Bracketed root of ``f`` on [lo, hi] (Brent's bisection/secant hybrid)."""
    tol = tol or Tolerance(abs_tol=1e-15, rel_tol=4 * 2.2e-16, max_depth=80)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise NoBracketError(
            f"f(lo) = {f_lo!r} and f(hi) = {f_hi!r} have the same sign on [{lo!r}, {hi!r}]")
    try:
        root = brentq(f, lo, hi, xtol=max(tol.abs_tol, 1e-300),
                      rtol=max(tol.rel_tol, 4 * 2.2205e-16), maxiter=max(tol.max_depth, 1))
    except RuntimeError as exc:
        raise ConvergenceError(f"root finding did not converge: {exc}") from None
    return min(max(root, lo), hi)


def relative_error(approx, exact, tiny=1e-300):
    return abs(approx - exact) / max(abs(exact), tiny)
