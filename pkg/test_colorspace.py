#!/usr/bin/env python3
"""
hdrgamut Color Space Tests
==========================

XYZ, LAB/LCh, xyY and IPT conversions, RGB matrices and the sRGB transfer.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hdrgamut.color.colorspace import (
    D65_WHITE,
    Chromaticities,
    ipt_to_xyz,
    lch_to_xyz,
    rgb_to_lch,
    rgb_to_xyz_matrix,
    srgb_decode,
    srgb_encode,
    xy_to_xyz,
    xyy_to_xyz,
    xyz_to_ipt,
    xyz_to_ipt_cyl,
    xyz_to_lab,
    xyz_to_lch,
    xyz_to_xyy,
)
from hdrgamut.config.gamuts import SRGB
from hdrgamut.errors import GamutError

xyz_triples = arrays(np.float64, (8, 3), elements=st.floats(0.01, 2.0))


def test_white_is_lab_100():
    lab = xyz_to_lab(xy_to_xyz(D65_WHITE, 100.0), white_y=100.0)
    np.testing.assert_allclose(lab, [100.0, 0.0, 0.0], atol=1e-10)


def test_srgb_luminance_row():
    np.testing.assert_allclose(rgb_to_xyz_matrix(SRGB)[1], [0.2126, 0.7152, 0.0722], atol=1e-4)


def test_rgb_white_maps_to_white_point():
    xyz = rgb_to_xyz_matrix(SRGB) @ np.ones(3)
    np.testing.assert_allclose(xyz, xy_to_xyz(D65_WHITE), atol=1e-12)


def test_pure_red_lch():
    L, C, h = rgb_to_lch([1.0, 0.0, 0.0], SRGB)
    assert L == pytest.approx(53.24, abs=0.05)
    assert C == pytest.approx(104.55, abs=0.1)
    assert h == pytest.approx(40.0, abs=0.1)


@given(xyz_triples)
def test_lch_round_trip(xyz):
    back = lch_to_xyz(xyz_to_lch(xyz, 1.0), 1.0)
    np.testing.assert_allclose(back, xyz, rtol=1e-9, atol=1e-12)


@given(xyz_triples)
def test_ipt_round_trip(xyz):
    back = ipt_to_xyz(xyz_to_ipt(xyz, 1.0), 1.0)
    np.testing.assert_allclose(back, xyz, rtol=1e-8, atol=1e-12)


@given(xyz_triples)
def test_hue_range(xyz):
    hue = xyz_to_lch(xyz)[..., 2]
    assert np.all((hue >= 0.0) & (hue < 360.0))


@pytest.mark.parametrize("level", [0.01, 0.18, 1.0, 4.0])
def test_grey_is_achromatic_in_ipt(level):
    ich = xyz_to_ipt_cyl(xy_to_xyz(D65_WHITE, level), 1.0)
    assert ich[1] < 1e-10


def test_xyy_of_black():
    np.testing.assert_array_equal(xyz_to_xyy([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(xyy_to_xyz([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0])


@given(xyz_triples)
def test_xyy_round_trip(xyz):
    np.testing.assert_allclose(xyy_to_xyz(xyz_to_xyy(xyz)), xyz, rtol=1e-12)


def test_srgb_transfer():
    assert srgb_encode(0.0) == 0.0
    assert srgb_encode(1.0) == pytest.approx(1.0, abs=1e-12)
    assert srgb_encode(0.18) == pytest.approx(0.4614, abs=1e-4)
    values = np.linspace(0.0, 1.0, 101)
    np.testing.assert_allclose(srgb_decode(srgb_encode(values)), values, atol=1e-12)


def test_collinear_primaries_rejected():
    with pytest.raises(GamutError, match="degenerate primaries"):
        Chromaticities(red=(0.2, 0.2), green=(0.4, 0.4), blue=(0.6, 0.6))


def test_chromaticity_outside_unit_square_rejected():
    with pytest.raises(GamutError):
        Chromaticities(red=(1.2, 0.3), green=(0.3, 0.6), blue=(0.15, 0.06))
