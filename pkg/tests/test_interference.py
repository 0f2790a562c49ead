import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uavoutage.channel import LinkType, antenna_from_count, gamma_from_uniforms
from uavoutage.geometry import ServingContext
from uavoutage.interference import (CoverageError, LaplaceEngine, _check_partial_sums,
                                    _with_noise, alignment_cases, coverage_derivative_sum,
                                    coverage_from_log_derivatives, decomposed_processes,
                                    derivative_ratios, fading_laplace_factor, laplace_transform,
                                    log_laplace, mainlobe_probability, scaled_one_minus_mgf)
from uavoutage.network import AssociationScheme, reference_network

NET = reference_network(9)
SIGMA2 = NET.channel.noise_power
CONTEXTS = [
    ServingContext(0, LinkType.LOS, 200.0, 150.0),
    ServingContext(0, LinkType.LOS, 450.0, 150.0, 0.2),
    ServingContext(1, LinkType.LOS, 230.0, 200.0, -0.15),
    ServingContext(0, LinkType.NLOS, 700.0, 150.0, -0.1),
    ServingContext(0, LinkType.LOS, 160.0, 150.0, 0.25),
]


def test_mainlobe_probability_value():
    theta = math.sqrt(3) / 3
    assert mainlobe_probability(antenna_from_count(9)) == pytest.approx(theta ** 2 / math.pi ** 2)
    assert mainlobe_probability(antenna_from_count(9)) == pytest.approx(0.033774, abs=1e-6)


@given(st.integers(1, 4096))
def test_mainlobe_probability_bounded(n):
    assert 0 < mainlobe_probability(antenna_from_count(n)) <= 1


@pytest.mark.parametrize("nv,nu", [(1, 1), (4, 4), (9, 4), (64, 16)])
def test_alignment_case_gains(nv, nu):
    g = [c.combined_gain for c in alignment_cases(antenna_from_count(nv), antenna_from_count(nu))]
    assert g[0] >= g[1] and g[2] >= g[3]
    assert g[0] == max(g) and g[3] == min(g)
    assert g[0] == nv * nu


def test_decomposed_density_bookkeeping():
    for k, tier in enumerate(NET.tiers):
        procs = [p for p in decomposed_processes(NET) if p.tier_index == k]
        dens = {p.case.index: p.density for p in procs}
        p_tm = mainlobe_probability(tier.pattern)
        assert dens[1] == dens[2] == pytest.approx(p_tm * tier.density)
        assert dens[3] == dens[4] == pytest.approx((1 - p_tm) * tier.density)
        inside = sum(p.density for p in procs if p.inside)
        outside = sum(p.density for p in procs if not p.inside)
        assert inside == pytest.approx(tier.density) and outside == pytest.approx(tier.density)


def test_fading_factor_limits():
    assert fading_laplace_factor(100.0, 0.0, LinkType.LOS, 150.0, 1.0, 36.0, NET.channel) == 1.0
    x = 1e6 * 0.01 * 2.0 * 5.0 * (300.0 ** 2 + 150.0 ** 2) ** -2
    got = fading_laplace_factor(300.0, 1e6, LinkType.NLOS, 150.0, 2.0, 5.0, NET.channel)
    assert got == pytest.approx(1 / (1 + x))


@pytest.mark.parametrize("link", list(LinkType))
def test_fading_factor_against_gamma_draws(link):
    m = NET.channel.m(link)
    rng = np.random.default_rng(3)
    h = gamma_from_uniforms(rng.random((1_000_000, m)), m)
    s, z, gain = 3e5, 200.0, 9.0
    u = NET.channel.atten(link) * 1.0 * gain * (z * z + 150.0 ** 2) ** (-0.5 * NET.channel.alpha(link))
    mc = np.exp(-s * u * h).mean()
    assert mc == pytest.approx(fading_laplace_factor(z, s, link, 150.0, 1.0, gain, NET.channel), abs=0.003)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_scaled_mgf_derivatives_finite_difference(m):
    u, s = 2.0, 0.7
    f = lambda t: 1 - (m / (m + t * u)) ** m
    got = scaled_one_minus_mgf(s * u, m, 2)
    h = 1e-4
    assert got[0] == pytest.approx(f(s), rel=1e-13)
    assert got[1] == pytest.approx(s * (f(s + h) - f(s - h)) / (2 * h), rel=1e-7)
    assert got[2] == pytest.approx(s * s * (f(s + h) - 2 * f(s) + f(s - h)) / h ** 2, rel=1e-5)


def test_derivative_ratios_closed_form():
    # F = exp(-sqrt(s)): s F'/F = -sqrt(s)/2 and s^2 F''/F = s/4 + sqrt(s)/4
    s = np.array([0.3, 4.0, 90.0])
    a = np.stack([-np.sqrt(s), -np.sqrt(s) / 2, np.sqrt(s) / 4])
    b = derivative_ratios(a)
    assert np.allclose(b[0], 1.0)
    assert np.allclose(b[1], -np.sqrt(s) / 2)
    assert np.allclose(b[2], s / 4 + np.sqrt(s) / 4)
    cov = coverage_from_log_derivatives(a)
    assert np.allclose(cov, np.exp(-np.sqrt(s)) * (1 + np.sqrt(s) / 2 + (s + np.sqrt(s)) / 8))


def test_partial_sum_guard():
    with pytest.raises(CoverageError):
        _check_partial_sums(np.array([[0.0], [5.0]]))


@pytest.mark.parametrize("ctx", CONTEXTS)
def test_laplace_at_zero_is_one(ctx):
    assert log_laplace(0.0, ctx, NET) == 0.0
    assert laplace_transform(0.0, ctx, NET) == 1.0
    assert LaplaceEngine(NET).log_laplace(0.0, ctx, order=2)[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("scheme", list(AssociationScheme))
@pytest.mark.parametrize("ctx", CONTEXTS)
def test_q_strictly_decreasing(ctx, scheme):
    qs = [log_laplace(10.0 ** i, ctx, NET, scheme) for i in range(0, 12)]
    assert all(b < a for a, b in zip(qs, qs[1:]))
    assert all(math.exp(q) <= 1 for q in qs)


@pytest.mark.parametrize("scheme", list(AssociationScheme))
def test_engine_matches_reference(scheme):
    eng = LaplaceEngine(NET, scheme)
    for ctx in CONTEXTS:
        for s in (1e3, 1e5, 1e7):
            ref = [log_laplace(s, ctx, NET, scheme, order=o) for o in range(3)]
            got = eng.log_laplace(s, ctx, order=2)
            assert np.allclose(got, ref, rtol=1e-4, atol=0)


def _fd_oracle(s, ctx, net):
    f = lambda x: math.exp(-x * net.channel.noise_power + log_laplace(x, ctx, net, rel_tol=1e-12))
    h = 1e-4 * s
    fm, f0, fp = f(s - h), f(s), f(s + h)
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / h ** 2


@pytest.mark.parametrize("ctx,s", [(CONTEXTS[0], 1e5), (CONTEXTS[1], 3e6), (CONTEXTS[2], 2e5),
                                   (CONTEXTS[3], 1e9), (CONTEXTS[4], 1e7)])
def test_derivatives_against_finite_differences(ctx, s):
    q = LaplaceEngine(NET).log_laplace(s, ctx, order=2)
    a = _with_noise(q, s, SIGMA2)
    f = math.exp(a[0])
    b = derivative_ratios(a) * f
    d1, d2 = _fd_oracle(s, ctx, NET)
    assert b[1] / s == pytest.approx(d1, rel=1e-3)
    assert b[2] / s ** 2 == pytest.approx(d2, rel=1e-3)


@pytest.mark.parametrize("ctx", CONTEXTS[:3])
def test_complete_monotonicity(ctx):
    eng = LaplaceEngine(NET)
    for s in np.geomspace(1e-3, 1e9, 25):
        a = _with_noise(eng.log_laplace(s, ctx, order=2), s, SIGMA2)
        b = derivative_ratios(a) * math.exp(a[0])
        assert b[0] > 0
        assert -b[1] >= 0
        assert b[2] >= 0


def test_coverage_nlos_is_single_term():
    ctx = CONTEXTS[3]
    s = 1e8
    expected = math.exp(-s * SIGMA2) * laplace_transform(s, ctx, NET)
    assert coverage_derivative_sum(s, ctx, NET) == pytest.approx(expected, rel=1e-4)


def test_coverage_in_unit_interval_and_decreasing():
    ctx = CONTEXTS[0]
    covs = [coverage_derivative_sum(s, ctx, NET) for s in np.geomspace(1e2, 1e9, 15)]
    assert all(0 <= c <= 1 for c in covs)
    assert all(b <= a + 1e-9 for a, b in zip(covs, covs[1:]))


def test_coverage_rejects_negative_order():
    with pytest.raises(ValueError):
        coverage_derivative_sum(1e5, CONTEXTS[0], NET, t_max=-1)


@settings(max_examples=20)
@given(st.floats(0.0, 1.5), st.floats(150.0, 3000.0), st.floats(-0.25, 0.25))
def test_engine_log_laplace_nonpositive(log_s, r, delta):
    ctx = ServingContext(0, LinkType.LOS, r, 150.0, delta)
    q = LaplaceEngine(NET).log_laplace(10 ** (4 * log_s + 2), ctx, order=1)
    assert q[0] <= 0 and q[1] <= 0
