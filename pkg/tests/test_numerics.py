import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sssim.errors import NoBracketError, NonFiniteIntegrandError
from sssim.noise import literal_integrand
from sssim.numerics import (
    _WG,
    _WGK,
    QuadratureResult,
    Tolerance,
    find_root,
    integrate,
    log_sinh,
    relative_error,
)


def midpoint_richardson(f, a, b, levels=12):
    """Romberg extrapolation on the composite midpoint rule (independent oracle)."""
    table = []
    for k in range(levels):
        n = 3 ** k  # step ratio 3: error series in h^2 cancels with factors 9^j
        h = (b - a) / n
        m = h * math.fsum(f(a + (i + 0.5) * h) for i in range(n))
        row = [m]
        for j in range(1, k + 1):
            factor = 9 ** j
            row.append((factor * row[j - 1] - table[k - 1][j - 1]) / (factor - 1))
        table.append(row)
        if n > 20000:
            break
    return table[-1][-1]


def test_kronrod_weights_sum_to_interval_length():
    total = 2 * math.fsum(_WGK[:-1]) + _WGK[-1]
    assert total == pytest.approx(2.0, abs=1e-15)
    assert 2 * math.fsum(_WG[:-1]) + _WG[-1] == pytest.approx(2.0, abs=1e-15)


def test_polynomial_exactness():
    res = integrate(lambda x: x * x, 0.0, 1.0)
    assert res.value == pytest.approx(1 / 3, abs=1e-12)
    assert res.converged


@pytest.mark.parametrize("degree", [0, 1, 5, 13, 21])
def test_polynomial_exact_up_to_kronrod_degree(degree):
    res = integrate(lambda x: x ** degree, -0.3, 1.7)
    exact = (1.7 ** (degree + 1) - (-0.3) ** (degree + 1)) / (degree + 1)
    assert relative_error(res.value, exact) <= 1e-12


def test_sine():
    res = integrate(math.sin, 0.0, math.pi)
    assert res.value == pytest.approx(2.0, abs=1e-10)


def test_deterministic():
    f = lambda x: math.exp(-x * x) * math.cos(7 * x)  # noqa: E731
    assert integrate(f, -3, 4) == integrate(f, -3, 4)


def test_converged_implies_error_within_target():
    tol = Tolerance(abs_tol=0.0, rel_tol=1e-10)
    res = integrate(lambda x: 1 / (1e-3 + x * x), -1, 1, tol)
    assert res.converged
    assert 0 <= res.error_estimate <= tol.target(res.value)
    assert res.value == pytest.approx(2 / math.sqrt(1e-3) * math.atan(1 / math.sqrt(1e-3)),
                                      rel=1e-9)


def test_depth_limit_reports_non_convergence():
    res = integrate(lambda x: math.sqrt(abs(x - 0.3)) * 1e6, 0, 1,
                    Tolerance(abs_tol=1e-300, rel_tol=1e-300, max_depth=2))
    assert not res.converged
    assert math.isfinite(res.value) and res.error_estimate > 0


def test_non_finite_integrand_reports_location():
    with pytest.raises(NonFiniteIntegrandError) as info:
        integrate(lambda x: 1 / (x - 0.5) if x != 0.5 else float("inf"), 0, 1)
    assert info.value.location == pytest.approx(0.5)


def test_bad_limits():
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 1.0)


@pytest.mark.parametrize("kwargs", [dict(abs_tol=-1), dict(abs_tol=0, rel_tol=0),
                                    dict(max_depth=0), dict(max_depth=81)])
def test_tolerance_validation(kwargs):
    with pytest.raises(ValueError):
        Tolerance(**kwargs)


def test_eq39_integrand_matches_midpoint_richardson(noise_params):
    p = noise_params
    lo, hi = p.lower, p.upper
    # unit variable keeps the oracle well scaled
    g = lambda u: literal_integrand(lo + (hi - lo) * u, p)  # noqa: E731
    oracle = midpoint_richardson(g, 0.0, 1.0) * (hi - lo)
    res = integrate(g, 0.0, 1.0, Tolerance(abs_tol=0, rel_tol=1e-12)).scaled(hi - lo)
    assert relative_error(res.value, oracle) < 1e-10


def test_scaled_result():
    r = QuadratureResult(2.0, 0.1, 15, True).scaled(-3.0)
    assert r.value == -6.0 and r.error_estimate == pytest.approx(0.3)


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(0.01, 2), st.floats(0.01, 2), st.floats(0.5, 4))
def test_additivity(a, w1, w2, k):
    f = lambda x: math.exp(math.sin(k * x))  # noqa: E731
    b, c = a + w1, a + w1 + w2
    left, right, whole = integrate(f, a, b), integrate(f, b, c), integrate(f, a, c)
    slack = left.error_estimate + right.error_estimate + whole.error_estimate + 1e-13 * abs(whole.value)
    assert abs(left.value + right.value - whole.value) <= slack


def test_log_sinh_small():
    assert log_sinh(1.0) == pytest.approx(float(mpmath.log(mpmath.sinh(1))), rel=1e-15)
    assert log_sinh(1.0) == pytest.approx(math.log(1.1752011936438014), rel=1e-15)


def test_log_sinh_large():
    assert log_sinh(800.0) == pytest.approx(800 - math.log(2), abs=1e-12)


def test_log_sinh_branch_continuity():
    x = 20.0
    direct = math.log(math.sinh(x))
    asym = x - math.log(2) + math.log1p(-math.exp(-2 * x))
    assert abs(direct - asym) <= 1e-13
    below = log_sinh(math.nextafter(x, 0))
    assert abs(log_sinh(x) - below) <= 1e-13


@settings(max_examples=200)
@given(st.floats(1e-6, 1e4), st.floats(1e-9, 10))
def test_log_sinh_increasing(x, dx):
    assert log_sinh(x + dx) > log_sinh(x)


def test_log_sinh_domain():
    with pytest.raises(ValueError):
        log_sinh(0.0)


def test_find_root_linear():
    assert find_root(lambda x: x - 2, 0.0, 5.0) == pytest.approx(2.0, abs=1e-14)


def test_find_root_no_bracket():
    with pytest.raises(NoBracketError):
        find_root(lambda x: x * x + 1, -1.0, 1.0)


@settings(max_examples=100)
@given(st.floats(-10, 10), st.floats(0.1, 10), st.floats(0.1, 10))
def test_find_root_inside_bracket(r, left, right):
    lo, hi = r - left, r + right
    f = lambda x: math.tanh(x - r)  # noqa: E731
    root = find_root(f, lo, hi)
    assert lo <= root <= hi
    assert abs(f(root)) <= max(abs(f(lo)), abs(f(hi))) * 1e-9
