import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from uavoutage.channel import ChannelParams, LinkType, link_probability
from uavoutage.network import AssociationScheme, NetworkConfig, TierConfig, reference_network
from uavoutage.serving import (LINKS, association_probability, association_table,
                               exclusion_exponent, link_integral, nearest_distance_pdf,
                               serving_pdf)

NET = reference_network(9)
# LoS probability within 1e-12 of one at every elevation
ALL_LOS = ChannelParams(env_a=1e-12)


@pytest.mark.parametrize("scheme", list(AssociationScheme))
def test_association_sums_to_one(scheme):
    assert sum(association_table(NET, scheme).values()) == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("height", [50.0, 150.0, 400.0])
def test_link_integral_against_scipy(height):
    w = link_integral(height, LinkType.LOS, NET.channel)
    for z in (10.0, 300.0, 2500.0, 40000.0):
        ref, _ = integrate.quad(lambda x: x * link_probability(LinkType.LOS, x, height, NET.channel),
                                0, z, limit=400, epsabs=0, epsrel=1e-11)
        # cubic Hermite table, so not quadrature-exact
        assert w(z) == pytest.approx(ref, rel=1e-6)


def test_link_integrals_add_to_half_square():
    for z in (0.0, 123.0, 5000.0):
        tot = sum(link_integral(150.0, l, NET.channel)(z) for l in LINKS)
        assert tot == pytest.approx(0.5 * z * z, rel=1e-9, abs=1e-12)


def test_nearest_distance_at_tier_height():
    tier = NET.tiers[0]
    for link in LINKS:
        p0 = link_probability(link, 0.0, tier.height, NET.channel)
        expected = 2 * math.pi * tier.density * tier.height * p0
        assert nearest_distance_pdf(tier, link, tier.height, NET.channel) == pytest.approx(expected)
    assert nearest_distance_pdf(tier, LinkType.LOS, 100.0, NET.channel) == 0.0


def test_nearest_distance_masses_sum_to_one():
    tier = TierConfig(150.0, 1e-5, 1.0)
    total = 0.0
    for link in LINKS:
        val, _ = integrate.quad(lambda r: nearest_distance_pdf(tier, link, r, NET.channel),
                                150.0, 3e4, limit=400, points=[300, 1000, 3000])
        total += val
    # each link type alone almost surely has a UAV somewhere in the plane
    assert total == pytest.approx(2.0, abs=1e-3)


def test_pure_ppp_median_scaling():
    def median_z(lam):
        tier = TierConfig(150.0, lam, 1.0)
        # CDF of the horizontal distance is 1 - exp(-2 pi lam W(z))
        w = link_integral(150.0, LinkType.LOS, ALL_LOS)
        zs = np.linspace(0, 2000, 200001)
        cdf = 1 - np.exp(-2 * math.pi * tier.density * w(zs))
        return zs[np.searchsorted(cdf, 0.5)]
    ratio = median_z(1e-5) / median_z(4e-5)
    assert ratio == pytest.approx(2.0, rel=1e-3)


def test_cdas_single_tier_closed_form():
    lam, h = 2e-5, 120.0
    net = NetworkConfig(tiers=(TierConfig(h, lam, 1.0),), channel=ALL_LOS)
    r = np.linspace(h, 800.0, 50)
    got = serving_pdf(AssociationScheme.CDAS, 0, LinkType.LOS, r, net)
    expected = 2 * math.pi * lam * r * np.exp(-math.pi * lam * (r * r - h * h))
    assert np.allclose(got, expected, rtol=1e-9)


def test_mapas_equals_cdas_when_links_identical():
    chan = ChannelParams(alpha_los=3.0, alpha_nlos=3.0, atten_los=0.5, atten_nlos=0.5)
    net = NET.replace(channel=chan)
    r = np.linspace(150.0, 3000.0, 200)
    for k in range(2):
        for link in LINKS:
            a = serving_pdf(AssociationScheme.MAPAS, k, link, r, net)
            b = serving_pdf(AssociationScheme.CDAS, k, link, r, net)
            assert np.allclose(a, b, rtol=1e-9, atol=1e-18)


def test_raising_tier_two_lowers_its_cdas_share():
    def share(h2):
        net = NET.with_heights([150.0, h2])
        return sum(association_probability(AssociationScheme.CDAS, 1, l, net).value for l in LINKS)
    assert share(250.0) < share(200.0) < share(160.0)


@pytest.mark.parametrize("scheme", list(AssociationScheme))
def test_single_tier_links_sum_to_one(scheme):
    net = NetworkConfig(tiers=(TierConfig(150.0, 1e-5, 1.0),))
    tot = sum(association_probability(scheme, 0, l, net).value for l in LINKS)
    assert tot == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("scheme", list(AssociationScheme))
def test_pdf_nonnegative_and_zero_below_height(scheme):
    r = np.concatenate([np.linspace(10, 149.9, 20), np.geomspace(150, 1e5, 300)])
    for k, tier in enumerate(NET.tiers):
        for link in LINKS:
            f = serving_pdf(scheme, k, link, r, NET)
            assert np.all(f >= 0)
            assert np.all(f[r < tier.height] == 0)


def test_mapas_exclusion_factor_non_increasing():
    r = np.geomspace(150, 2e4, 2000)
    for k in range(2):
        for link in LINKS:
            factor = np.exp(-exclusion_exponent(AssociationScheme.MAPAS, k, link, r, NET))
            assert np.all(np.diff(factor) <= 1e-15)


@settings(max_examples=15)
@given(st.floats(1e-6, 1e-4), st.floats(30, 300), st.floats(0, 200),
       st.sampled_from(list(AssociationScheme)))
def test_association_total_probability_property(density, h1, dh, scheme):
    net = reference_network(9).with_density(density).with_heights([h1, h1 + dh])
    assert sum(association_table(net, scheme).values()) == pytest.approx(1.0, abs=1e-3)
