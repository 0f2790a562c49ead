import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavoutage.quadrature import (QuadratureWarning, integrate_finite,
                                  integrate_semi_infinite)

# (integrand, a, b, exact) with antiderivatives worked by hand
FINITE_CASES = [
    (lambda x: x, 0.0, 1.0, 0.5),
    (lambda x: x ** 5, -1.0, 2.0, (64 - 1) / 6),
    (np.exp, 0.0, 1.0, math.e - 1),
    (np.sin, 0.0, math.pi, 2.0),
    (np.cos, 0.0, 10.0, math.sin(10.0)),
    (lambda x: 1 / (1 + x * x), -5.0, 5.0, 2 * math.atan(5.0)),
    (np.sqrt, 0.0, 1.0, 2 / 3),
    (lambda x: x ** -0.5, 1e-12, 1.0, 2 * (1 - 1e-6)),
    (np.log, 1.0, math.e, 1.0),
    (lambda x: x * np.exp(-x * x), 0.0, 10.0, 0.5 * (1 - math.exp(-100.0))),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.5 * (0.09 + 0.49)),
    (lambda x: np.exp(-50 * x * x), -3.0, 3.0, math.sqrt(math.pi / 50) * math.erf(3 * math.sqrt(50))),
    (lambda x: 1 / x, 1.0, 1000.0, math.log(1000.0)),
    (lambda x: np.sin(20 * x) ** 2, 0.0, math.pi, math.pi / 2),
    (lambda x: x ** 2 * np.log(x), 1.0, 2.0, 8 / 3 * math.log(2) - 7 / 9),
    (np.tanh, -2.0, 3.0, math.log(math.cosh(3.0) / math.cosh(2.0))),
    (lambda x: np.where(x < 0.5, 1.0, 0.0), 0.0, 1.0, 0.5),
    (lambda x: (1 + x) ** -2.5, 0.0, 100.0, (1 - 101 ** -1.5) / 1.5),
    (lambda x: np.exp(x) * np.cos(x), 0.0, math.pi, -(math.exp(math.pi) + 1) / 2),
    (lambda x: 1 / np.sqrt(1 - x * x), -0.999, 0.999, 2 * math.asin(0.999)),
    (lambda x: x / (x * x + 150.0 ** 2) ** 1.25, 0.0, 5000.0,
     2 * ((150.0 ** 2) ** -0.25 - (5000.0 ** 2 + 150.0 ** 2) ** -0.25)),
    (lambda x: np.cosh(x), -1.0, 1.0, 2 * math.sinh(1.0)),
]


def test_polynomial_exact():
    r = integrate_finite(lambda x: x, 0.0, 1.0)
    assert r.value == pytest.approx(0.5, abs=1e-12)
    assert r.evaluations > 0


def test_truncated_gaussian_moment():
    r = integrate_finite(lambda z: z * np.exp(-z * z), 0.0, 10.0, 1e-12, 1e-14)
    assert r.value == pytest.approx(0.5, abs=1e-10)


def test_empty_interval_is_exact_zero():
    r = integrate_finite(np.exp, 2.0, 2.0)
    assert r.value == 0.0 and r.error_estimate == 0.0


def test_reversed_limits_flip_sign():
    assert integrate_finite(np.exp, 1.0, 0.0).value == pytest.approx(-(math.e - 1), rel=1e-12)


@pytest.mark.parametrize("case", range(len(FINITE_CASES)))
def test_error_estimate_never_overclaims(case):
    f, a, b, exact = FINITE_CASES[case]
    r = integrate_finite(f, a, b, rel_tol=1e-9, abs_tol=1e-13)
    assert abs(r.value - exact) <= r.error_estimate + 1e-15
    assert r.converged


def test_battery_has_enough_cases():
    assert len(FINITE_CASES) >= 20


def test_subdivision_limit_reports_partial_result():
    r = integrate_finite(lambda x: np.sin(1 / x), 1e-6, 1.0, rel_tol=1e-14, abs_tol=0.0,
                         max_subdivisions=10)
    assert not r.converged
    assert r.message
    assert math.isfinite(r.error_estimate) and r.error_estimate > 0


def test_non_finite_integrand_raises():
    with pytest.raises(FloatingPointError):
        integrate_finite(lambda x: 1 / (x - 0.5) * np.inf, 0.0, 1.0)


def test_power_law_tail():
    for hint in (None, 2.0):
        r = integrate_semi_infinite(lambda z: z ** -2.0, 1.0, 1e-10, 1e-12, decay_hint=hint)
        assert r.value == pytest.approx(1.0, abs=1e-8)


def test_zero_integrand_semi_infinite():
    r = integrate_semi_infinite(lambda z: np.zeros_like(z), 0.0)
    assert r.value == 0.0 and r.error_estimate == 0.0


def test_rational_tail_against_monte_carlo():
    # int_0^inf z / (1 + z^4) dz by importance sampling with density 1/(1+z)^2
    f = lambda z: z / (1 + z ** 4)
    rng = np.random.default_rng(11)
    u = rng.random(10_000_000)
    z = u / (1 - u)
    w = f(z) * (1 + z) ** 2
    mc, se = w.mean(), w.std() / math.sqrt(w.size)
    r = integrate_semi_infinite(f, 0.0, rel_tol=1e-10, abs_tol=1e-14)
    assert abs(r.value - mc) <= 3 * se
    assert r.value == pytest.approx(math.pi / 4, rel=1e-9)


def test_decay_hint_tail_envelope_in_error():
    alpha = 2.5
    f = lambda z: z * (z * z + 150.0 ** 2) ** (-alpha / 2)
    exact = (5000.0 ** 2 + 150.0 ** 2) ** (1 - alpha / 2) / (alpha - 2)
    r = integrate_semi_infinite(f, 5000.0, 1e-8, 0.0, decay_hint=alpha - 1)
    assert abs(r.value - exact) <= r.error_estimate
    assert r.value == pytest.approx(exact, rel=1e-6)


def test_undetected_decay_warns():
    with pytest.warns(QuadratureWarning):
        r = integrate_semi_infinite(lambda z: 1 / np.sqrt(z), 1.0, 1e-8, 0.0, decay_hint=1.5)
    assert not r.converged


def test_bad_decay_hint():
    with pytest.raises(ValueError):
        integrate_semi_infinite(lambda z: z ** -2, 1.0, decay_hint=1.0)


@given(st.floats(0.1, 5.0), st.floats(0.0, 3.0), st.floats(0.01, 3.0))
def test_gaussian_bumps_deterministic_and_honest(width, centre, span):
    f = lambda x: np.exp(-((x - centre) / width) ** 2)
    a, b = centre - span, centre + 2 * span
    r1 = integrate_finite(f, a, b, 1e-9, 1e-13)
    r2 = integrate_finite(f, a, b, 1e-9, 1e-13)
    assert r1 == r2
    exact = 0.5 * math.sqrt(math.pi) * width * (math.erf((b - centre) / width)
                                               - math.erf((a - centre) / width))
    assert abs(r1.value - exact) <= r1.error_estimate + 1e-15


# exponents closer to 2 decay too slowly for the doubling search and warn instead
@given(st.floats(2.2, 6.0), st.floats(10.0, 500.0), st.floats(1.0, 1e4))
def test_power_law_semi_infinite_property(alpha, h, a):
    f = lambda z: z * (z * z + h * h) ** (-alpha / 2)
    exact = (a * a + h * h) ** (1 - alpha / 2) / (alpha - 2)
    r = integrate_semi_infinite(f, a, 1e-8, 0.0, decay_hint=alpha - 1)
    assert r.value == pytest.approx(exact, rel=1e-5)
    assert abs(r.value - exact) <= r.error_estimate
