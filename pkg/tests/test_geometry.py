import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavoutage.channel import ChannelParams, LinkType, antenna_from_count
from uavoutage.geometry import (ProjectionRegion, ServingContext, equivalent_distance_cdas,
                                equivalent_distance_mapas, projection_region, ring_radii)

P = ChannelParams()


def test_ring_first_branch_values():
    z_in, z_out = map(float, ring_radii(math.pi / 4, 150.0, 0.5))
    assert z_in == pytest.approx(150 / math.tan(math.pi / 4 + 0.25), rel=1e-14)
    assert z_out == pytest.approx(150 / math.tan(math.pi / 4 - 0.25), rel=1e-14)
    # independent evaluation, frozen
    assert z_in == pytest.approx(88.97872, abs=1e-3)
    assert z_out == pytest.approx(252.86946, abs=1e-3)


def test_ring_overhead_branch():
    theta = 0.5
    z_in, z_out = ring_radii(math.pi / 2 - theta / 2 + 0.01, 150.0, theta)
    assert z_in == 0.0
    assert z_out == pytest.approx(150 / math.tan(math.pi / 2 - theta))


def test_ring_unbounded_when_lower_edge_below_horizon():
    z_in, z_out = ring_radii(0.1, 150.0, 0.5)
    assert math.isinf(z_out) and z_out > 0
    assert z_in == pytest.approx(150 / math.tan(0.35))


def test_projection_region_from_context():
    ue = antenna_from_count(4)
    ctx = ServingContext(0, LinkType.LOS, 150 * math.sqrt(2), 150.0)
    reg = projection_region(ctx, 200.0, ue)
    z_in, z_out = map(float, ring_radii(math.pi / 4, 200.0, ue.width_elevation))
    assert (reg.inner_radius, reg.outer_radius) == pytest.approx((z_in, z_out))
    assert reg.angle == ue.width_azimuth
    assert not reg.unbounded


def test_projection_region_marks_infinity():
    ctx = ServingContext(0, LinkType.NLOS, 3000.0, 150.0, ue_elevation_error=-0.2)
    reg = projection_region(ctx, 150.0, antenna_from_count(4))
    assert reg.unbounded


def test_projection_region_rejects_bad_height():
    ctx = ServingContext(0, LinkType.LOS, 200.0, 150.0)
    with pytest.raises(ValueError):
        projection_region(ctx, 0.0, antenna_from_count(4))


def test_region_and_context_validation():
    with pytest.raises(ValueError):
        ProjectionRegion(10.0, 5.0, 1.0)
    with pytest.raises(ValueError):
        ProjectionRegion(0.0, 5.0, 2 * math.pi)
    with pytest.raises(ValueError):
        ServingContext(0, LinkType.LOS, 100.0, 150.0)


def test_elevation_angle():
    ctx = ServingContext(0, LinkType.LOS, 300.0, 150.0)
    assert ctx.elevation_angle == pytest.approx(math.pi / 6)
    assert ServingContext(0, LinkType.LOS, 150.0, 150.0).elevation_angle == pytest.approx(math.pi / 2)


@given(st.floats(0.05, 1.2), st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(10, 500))
def test_ring_widens_with_beam(pointing, w1, w2, h):
    lo, hi = sorted((w1, w2))
    if pointing + hi / 2 >= math.pi / 2 - hi / 2 or pointing <= hi / 2:
        return  # first branch only, for both widths
    zi_lo, zo_lo = ring_radii(pointing, h, lo)
    zi_hi, zo_hi = ring_radii(pointing, h, hi)
    assert zi_hi <= zi_lo * (1 + 1e-12)
    assert zo_hi >= zo_lo * (1 - 1e-12)


@given(st.floats(-1.0, 1.6), st.floats(0.05, 3.0), st.floats(1, 1000))
def test_ring_ordered_on_all_branches(pointing, width, h):
    z_in, z_out = ring_radii(pointing, h, width)
    assert z_in >= 0
    assert z_out >= z_in


def test_mapas_same_link_examples():
    assert equivalent_distance_mapas(250.0, LinkType.LOS, LinkType.LOS, 150.0, P) == pytest.approx(200.0)
    assert equivalent_distance_mapas(150.0, LinkType.NLOS, LinkType.NLOS, 150.0, P) == 0.0


def test_mapas_cross_link_clamps_to_zero():
    # 100^(-1/2) * 300^1.25 is about 125 m^2, far below 150^2
    assert equivalent_distance_mapas(300.0, LinkType.LOS, LinkType.NLOS, 150.0, P) == 0.0


def test_mapas_cross_link_nlos_serving():
    # NLoS at 300 m matches LoS at (100 * 300^4)^(1/2.5)
    r_eq = (100.0 * 300.0 ** 4) ** (1 / 2.5)
    z = equivalent_distance_mapas(300.0, LinkType.NLOS, LinkType.LOS, 150.0, P)
    assert z == pytest.approx(math.sqrt(r_eq ** 2 - 150.0 ** 2), rel=1e-12)


@given(st.floats(150, 1e4), st.floats(10, 149), st.sampled_from(list(LinkType)),
       st.sampled_from(list(LinkType)))
def test_mapas_collapses_when_links_identical(r, h, a, b):
    same = ChannelParams(alpha_los=3.0, alpha_nlos=3.0, atten_los=0.5, atten_nlos=0.5)
    z = equivalent_distance_mapas(r, a, b, h, same)
    assert z == pytest.approx(math.sqrt(r * r - h * h), rel=1e-10)


def test_cdas_examples():
    assert equivalent_distance_cdas(250.0, 150.0) == pytest.approx(200.0)
    assert equivalent_distance_cdas(100.0, 150.0) == 0.0
    assert equivalent_distance_cdas(150.0, 150.0) == 0.0
    assert np.allclose(equivalent_distance_cdas(np.array([250.0, 100.0]), 150.0), [200.0, 0.0])
