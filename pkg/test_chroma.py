#!/usr/bin/env python3
"""
hdrgamut Chroma Compression Tests
=================================

Percentile policy, per-hue scale vectors, smoothing and the hue-specific
and global compressions.
"""

import numpy as np
import pytest
from conftest import lch_image
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hdrgamut.chroma.compression import (
    apply_global,
    apply_hue_specific,
    compress_chroma,
    global_scale,
    hue_specific_compression,
)
from hdrgamut.chroma.policy import PercentilePolicy, out_of_gamut_mask, select_percentile
from hdrgamut.chroma.scale import ScaleVector, compute_scale_vector
from hdrgamut.chroma.smoothing import SMOOTHING_METHODS, smooth_scale_vector
from hdrgamut.gamut.boundary import GamutBoundary
from hdrgamut.gamut.source import SourceGamut
from hdrgamut.imaging.buffer import HUE_BINS

POLICY = PercentilePolicy(spread_percentile=0.95, concentrated_percentile=1.0)


def _impulse(position: int, value: float = 2.5) -> np.ndarray:
    raw = np.ones(HUE_BINS)
    raw[position] = value
    return raw


def _source(chroma_at_10: float) -> SourceGamut:
    chroma = np.zeros(HUE_BINS)
    chroma[10] = chroma_at_10
    counts = np.zeros(HUE_BINS, dtype=np.int64)
    counts[10] = 1
    return SourceGamut(chroma=chroma, lightness_max=np.zeros(HUE_BINS), lightness_min=np.zeros(HUE_BINS),
                       counts=counts, percentile=1.0)


# percentile policy

def test_in_gamut_image_uses_full_range(flat_boundary):
    img = lch_image(np.full((8, 8), 50.0), np.zeros((8, 8)), np.zeros((8, 8)))
    assert not out_of_gamut_mask(img, flat_boundary).any()
    assert select_percentile(img, flat_boundary, POLICY) == 1.0


def test_concentrated_out_of_gamut_regions(flat_boundary):
    chroma = np.zeros((200, 200))
    chroma[0:50, 0:67] = 80.0
    chroma[100:150, 0:67] = 80.0
    chroma[0:50, 120:186] = 80.0
    img = lch_image(np.full(chroma.shape, 50.0), chroma, np.full(chroma.shape, 30.0))
    assert out_of_gamut_mask(img, flat_boundary).sum() == 10000
    assert select_percentile(img, flat_boundary, POLICY) == 1.0


def test_spread_out_of_gamut_pixels(flat_boundary):
    chroma = np.zeros((40, 40))
    chroma[0:20:2, 0:40:2] = 80.0
    img = lch_image(np.full(chroma.shape, 50.0), chroma, np.full(chroma.shape, 30.0))
    assert out_of_gamut_mask(img, flat_boundary).sum() == 200
    assert select_percentile(img, flat_boundary, POLICY) == 0.95


def test_policy_validation():
    with pytest.raises(ValueError):
        PercentilePolicy(spread_percentile=1.5)
    with pytest.raises(ValueError):
        PercentilePolicy(concentrated_percentile=0.0)


# scale vector

@pytest.mark.parametrize("method", ["closed-form", "iterative"])
def test_scale_rounds_up_to_grid(flat_boundary, method):
    img = lch_image([81.0], [67.5], [10.5])
    scale = compute_scale_vector(img, flat_boundary, 1.0, d=0.1, method=method)
    assert scale.raw[10] == pytest.approx(1.4)
    assert np.all(np.delete(scale.raw, 10) == 1.0)
    np.testing.assert_array_equal(scale.raw, scale.smoothed)


def test_in_gamut_slice_needs_no_scaling(flat_boundary):
    img = lch_image([50.0, 30.0], [10.0, 20.0], [10.5, 11.5])
    scale = compute_scale_vector(img, flat_boundary, 1.0)
    assert scale.is_identity
    assert scale.excluded == 0


def test_unreachable_pixels_are_excluded(flat_boundary):
    img = lch_image([10.0, 70.0], [40.0, 40.0], [10.5, 10.5])
    scale = compute_scale_vector(img, flat_boundary, 1.0, d=0.1)
    assert scale.excluded == 1
    assert scale.raw[10] == pytest.approx(1.1)


def test_scale_is_capped(flat_boundary):
    img = lch_image([300.0], [240.0], [10.5])
    scale = compute_scale_vector(img, flat_boundary, 1.0, d=0.5, max_scale=3.0)
    assert scale.raw[10] == pytest.approx(3.0)


@given(
    st.lists(st.tuples(st.floats(0.0, 150.0), st.floats(0.0, 150.0)), min_size=1, max_size=12),
    st.sampled_from([0.05, 0.1, 0.25]),
)
def test_closed_form_matches_iterative(points, d):
    boundary = GamutBoundary(cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0))
    lightness, chroma = (np.array(v) for v in zip(*points))
    img = lch_image(lightness, chroma, np.full(lightness.size, 42.5))
    closed = compute_scale_vector(img, boundary, 1.0, d=d, method="closed-form", max_scale=5.0)
    iterative = compute_scale_vector(img, boundary, 1.0, d=d, method="iterative", max_scale=5.0)
    np.testing.assert_array_equal(closed.raw, iterative.raw)
    assert closed.excluded == iterative.excluded


def test_scale_vector_validation():
    with pytest.raises(ValueError):
        ScaleVector(raw=np.full(HUE_BINS, 0.5), smoothed=np.ones(HUE_BINS), d=0.1)
    with pytest.raises(ValueError):
        ScaleVector(raw=np.ones(359), smoothed=np.ones(359), d=0.1)
    with pytest.raises(ValueError):
        ScaleVector.constant(1.0, d=0.0)


def test_scale_vector_dump(tmp_path):
    path = tmp_path / "scale.txt"
    ScaleVector.constant(1.2).dump(str(path))
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# hue raw smoothed")
    assert len(lines) == HUE_BINS + 1
    assert lines[1].split() == ["0", "1.200000", "1.200000"]


# smoothing

def test_box_spreads_impulse_over_window():
    smoothed = smooth_scale_vector(_impulse(100), "lbox", 15)
    np.testing.assert_allclose(smoothed[93:108], 1.1, atol=1e-12)
    np.testing.assert_allclose(np.delete(smoothed, np.arange(93, 108)), 1.0, atol=1e-12)


def test_box_window_wraps_around():
    assert smooth_scale_vector(_impulse(353), "lbox", 15)[0] == pytest.approx(1.1)
    assert smooth_scale_vector(_impulse(352), "lbox", 15)[0] == pytest.approx(1.0)


@pytest.mark.parametrize("method", SMOOTHING_METHODS)
def test_constant_vector_unchanged(method):
    raw = np.full(HUE_BINS, 1.7)
    np.testing.assert_array_equal(smooth_scale_vector(raw, method, 15), raw)


@given(arrays(np.float64, HUE_BINS, elements=st.floats(1.0, 5.0)), st.sampled_from(SMOOTHING_METHODS))
def test_smoothing_stays_within_raw_range(raw, method):
    smoothed = smooth_scale_vector(raw, method, 15)
    assert smoothed.min() >= raw.min()
    assert smoothed.max() <= raw.max()


@pytest.mark.parametrize("window", [0, 14, 361])
def test_smoothing_window_must_be_odd(window):
    with pytest.raises(ValueError):
        smooth_scale_vector(np.ones(HUE_BINS), "lbox", window)


def test_unknown_smoothing_method():
    with pytest.raises(ValueError):
        smooth_scale_vector(np.ones(HUE_BINS), "median", 15)


# compression

def test_hue_specific_divides_base_chroma():
    img = lch_image(np.full((8, 8), 50.0), np.full((8, 8), 30.0), np.full((8, 8), 10.5))
    values = np.ones(HUE_BINS)
    values[10] = 2.0
    out = apply_hue_specific(img, ScaleVector(raw=values, smoothed=values, d=0.1))
    np.testing.assert_allclose(out.plane("C"), 15.0, rtol=1e-12)
    assert out.plane("L") is img.plane("L")
    assert out.plane("h") is img.plane("h")


def test_unit_scale_vector_is_identity():
    img = lch_image([50.0, 60.0], [30.0, 70.0], [10.5, 200.0])
    assert apply_hue_specific(img, ScaleVector.constant(1.0)) is img


def test_global_scale_ratio(flat_boundary):
    assert global_scale(_source(62.5), flat_boundary) == pytest.approx(0.8)
    assert global_scale(_source(40.0), flat_boundary) == pytest.approx(1.25)


def test_global_compression_scales_all_chroma(flat_boundary):
    img = lch_image(np.full((4, 4), 50.0), np.full((4, 4), 62.5), np.full((4, 4), 10.5))
    out = apply_global(img, _source(62.5), flat_boundary)
    np.testing.assert_allclose(out.plane("C"), 50.0, rtol=1e-12)

    same = apply_hue_specific(img, ScaleVector.constant(1.25))
    np.testing.assert_allclose(out.plane("C"), same.plane("C"), rtol=1e-12)


def test_global_compression_never_expands(flat_boundary):
    img = lch_image(np.full((4, 4), 50.0), np.full((4, 4), 40.0), np.full((4, 4), 10.5))
    assert apply_global(img, _source(40.0), flat_boundary) is img


def test_hue_specific_stage(flat_boundary, rng):
    shape = (24, 24)
    lightness = rng.uniform(40.0, 90.0, shape)
    chroma = rng.uniform(0.0, 70.0, shape)
    hue = rng.uniform(0.0, 360.0, shape)
    img = lch_image(lightness, chroma, hue)
    result = hue_specific_compression(img, flat_boundary, POLICY, filter_method="direct")
    assert result.percentile in (0.95, 1.0)
    assert result.scale_vector is not None
    assert np.all(result.image.plane("C") <= chroma + 1e-9)
    np.testing.assert_array_equal(result.image.plane("L"), lightness)
    np.testing.assert_array_equal(result.image.plane("h"), hue)


def test_compress_chroma_dispatch(flat_boundary):
    img = lch_image(np.full((4, 4), 50.0), np.full((4, 4), 62.5), np.full((4, 4), 10.5))
    assert compress_chroma(img, flat_boundary, "none") is None
    result = compress_chroma(img, flat_boundary, "global", POLICY, decomposition="none", d=0.1)
    assert result.global_scale == pytest.approx(0.8)
    with pytest.raises(ValueError):
        compress_chroma(img, flat_boundary, "perceptual")
