#!/usr/bin/env python3
"""
hdrgamut Gamut Tests
====================

Target boundary construction, triangle containment and the source gamut.
"""

import numpy as np
import pytest
from conftest import lch_image
from hypothesis import given
from hypothesis import strategies as st

from hdrgamut.color.colorspace import LChColor, rgb_to_lch
from hdrgamut.config.gamuts import SRGB, load_chromaticities, resolve_target
from hdrgamut.errors import ConfigurationError, GamutError
from hdrgamut.gamut.boundary import (
    GamutBoundary,
    brute_force_cusps,
    build_target_boundary,
    contains,
    contains_scaled,
    max_chroma_at,
)
from hdrgamut.gamut.source import build_source_gamut
from hdrgamut.imaging.buffer import HUE_BINS, hue_bins


def _surface(samples: int) -> np.ndarray:
    axis = np.linspace(0.0, 1.0, samples)
    u, v = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))
    faces = []
    for channel in range(3):
        for value in (0.0, 1.0):
            others = [c for c in range(3) if c != channel]
            face = np.empty((u.size, 3))
            face[:, channel] = value
            face[:, others[0]], face[:, others[1]] = u, v
            faces.append(face)
    return np.concatenate(faces)


def test_boundary_has_one_slice_per_degree(srgb_boundary):
    assert srgb_boundary.cusp_c.shape == (HUE_BINS,)
    assert len(srgb_boundary.slices) == HUE_BINS
    assert np.all(srgb_boundary.cusp_c > 0.0)
    assert np.all((srgb_boundary.cusp_l > 0.0) & (srgb_boundary.cusp_l < 100.0))


def test_boundary_is_read_only(srgb_boundary):
    with pytest.raises(ValueError):
        srgb_boundary.cusp_c[0] = 1.0


def test_surface_samples_within_cusp_chroma(srgb_boundary):
    lch = rgb_to_lch(_surface(128), SRGB)
    chromatic = lch[:, 1] > 1e-9
    bins = hue_bins(lch[chromatic, 2])
    assert np.all(lch[chromatic, 1] <= srgb_boundary.cusp_c[bins] + 1e-9)


def test_primary_corners_reach_their_cusp(srgb_boundary):
    for rgb in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        L, C, h = rgb_to_lch(np.array(rgb, dtype=np.float64), SRGB)
        assert srgb_boundary.cusp_c[hue_bins(h)] >= C - 1e-9


def test_blue_has_largest_chroma(srgb_boundary):
    assert srgb_boundary.cusp_c.max() == pytest.approx(133.8, abs=1.0)


@pytest.fixture(scope="module")
def fine_boundary() -> GamutBoundary:
    return build_target_boundary(SRGB, 512)


def test_random_cube_colours_are_contained(fine_boundary):
    rgb = np.random.default_rng(7).uniform(0.0, 1.0, (100_000, 3))
    lch = rgb_to_lch(rgb, SRGB)
    inside = fine_boundary.contains_mask(lch[:, 0], lch[:, 1], lch[:, 2], epsilon=0.5)
    assert inside.all(), lch[~inside][:5]


def test_dark_saturated_colours_are_contained(fine_boundary):
    for rgb in ([0.048, 5e-5, 0.283], [0.0, 0.0, 0.1], [0.05, 0.0, 0.0], [0.0, 0.03, 0.02]):
        L, C, h = rgb_to_lch(np.array(rgb), SRGB)
        assert contains(fine_boundary, LChColor(L, C, h), epsilon=0.5), rgb


def test_fitted_edges_leave_the_display_range(fine_boundary):
    assert np.all(fine_boundary.floor_l <= -16.0)
    assert np.all(fine_boundary.ceiling_l >= 100.0)
    slice_ = fine_boundary.slice(40.5)
    assert (slice_.floorL, slice_.ceilingL) == (fine_boundary.floor_l[40], fine_boundary.ceiling_l[40])


def test_inflated_colours_fall_outside(srgb_boundary):
    rng = np.random.default_rng(11)
    hue = rng.uniform(0.0, 360.0, 100_000)
    lightness = rng.uniform(0.5, 99.5, 100_000)
    chroma = 1.2 * max_chroma_at(srgb_boundary, hue, lightness)
    assert not srgb_boundary.contains_mask(lightness, chroma, hue).any()


@pytest.mark.slow
def test_surface_matches_brute_force(fine_boundary):
    brute = brute_force_cusps(SRGB, 512)
    assert np.max(np.abs(fine_boundary.cusp_c - brute.cusp_c)) <= 0.5
    assert np.max(np.abs(fine_boundary.cusp_l - brute.cusp_l)) <= 0.5


def test_too_few_samples_rejected():
    with pytest.raises(ValueError):
        build_target_boundary(SRGB, 16)


def test_inflated_cusps_fall_outside(srgb_boundary):
    hue = np.arange(HUE_BINS) + 0.5
    at_cusp = srgb_boundary.contains_mask(srgb_boundary.cusp_l, srgb_boundary.cusp_c, hue)
    inflated = srgb_boundary.contains_mask(srgb_boundary.cusp_l, srgb_boundary.cusp_c * 1.2, hue)
    assert at_cusp.all()
    assert not inflated.any()


def test_max_chroma_at_triangle_corners(flat_boundary):
    assert max_chroma_at(flat_boundary, 10.0, 0.0) == 0.0
    assert max_chroma_at(flat_boundary, 10.0, 100.0) == pytest.approx(0.0, abs=1e-12)
    assert max_chroma_at(flat_boundary, 10.0, 60.0) == pytest.approx(50.0)
    assert max_chroma_at(flat_boundary, 10.0, 30.0) == pytest.approx(25.0)
    assert max_chroma_at(flat_boundary, 10.0, 80.0) == pytest.approx(25.0)


@pytest.mark.parametrize("lightness", [-1.0, 100.5])
def test_max_chroma_outside_display_range(flat_boundary, lightness):
    with pytest.raises(GamutError):
        max_chroma_at(flat_boundary, 10.0, lightness)


def test_contains_and_scaled_contains(flat_boundary):
    assert contains(flat_boundary, LChColor(60.0, 50.0, 200.0))
    assert not contains(flat_boundary, LChColor(60.0, 51.0, 200.0))
    assert not contains(flat_boundary, LChColor(101.0, 0.0, 200.0))
    assert not contains(flat_boundary, LChColor(70.0, 40.0, 200.0))
    assert contains_scaled(flat_boundary, LChColor(70.0, 40.0, 200.0), 1.1)
    assert not contains_scaled(flat_boundary, LChColor(60.0, 51.0, 200.0), 1.1)
    with pytest.raises(ValueError):
        contains_scaled(flat_boundary, LChColor(60.0, 50.0, 200.0), 0.5)


@given(st.floats(0.0, 150.0), st.floats(0.0, 150.0), st.floats(0.0, 359.99))
def test_min_enclosing_scale_is_tight(lightness, chroma, hue):
    boundary = GamutBoundary(cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0))
    need = float(boundary.min_enclosing_scale(lightness, chroma, hue))
    if not np.isfinite(need) or need < 1e-6:
        return
    assert boundary.contains_scaled_mask(lightness, chroma, hue, need * (1.0 + 1e-9), epsilon=1e-6)
    assert not boundary.contains_scaled_mask(lightness, chroma, hue, need * 0.99, epsilon=0.0)


def test_points_under_lower_edge_unreachable(flat_boundary):
    assert np.isinf(flat_boundary.min_enclosing_scale(10.0, 40.0, 0.0))
    assert np.isinf(flat_boundary.min_enclosing_scale(-5.0, 0.0, 0.0))


def _floored_boundary():
    return GamutBoundary(
        cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0),
        floor_l=np.full(HUE_BINS, -16.0), ceiling_l=np.full(HUE_BINS, 110.0),
    )


@given(st.floats(0.0, 150.0), st.floats(0.0, 150.0), st.floats(0.0, 359.99))
def test_min_enclosing_scale_is_tight_with_fitted_edges(lightness, chroma, hue):
    boundary = _floored_boundary()
    need = float(boundary.min_enclosing_scale(lightness, chroma, hue))
    assert np.isfinite(need)
    if need < 1e-6:
        return
    assert boundary.contains_scaled_mask(lightness, chroma, hue, need * (1.0 + 1e-9), epsilon=1e-6)
    assert not boundary.contains_scaled_mask(lightness, chroma, hue, need * 0.99, epsilon=0.0)


def test_fitted_floor_reaches_under_the_origin_edge():
    boundary = _floored_boundary()
    # C at L=10 on the floored lower edge is 50 * 26 / 76
    assert boundary.max_chroma(0.0, 10.0) == pytest.approx(50.0 * 26.0 / 76.0)
    assert boundary.contains_mask(10.0, 15.0, 0.0)
    assert np.isfinite(boundary.min_enclosing_scale(10.0, 40.0, 0.0))


def test_edges_must_straddle_the_display_range():
    with pytest.raises(GamutError):
        GamutBoundary(cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0),
                      floor_l=np.full(HUE_BINS, 1.0))
    with pytest.raises(GamutError):
        GamutBoundary(cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0),
                      ceiling_l=np.full(HUE_BINS, 90.0))


def test_dump_and_load(tmp_path, srgb_boundary):
    path = tmp_path / "boundary.txt"
    srgb_boundary.dump(str(path))
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")
    assert len(lines) == HUE_BINS + 1
    loaded = GamutBoundary.load(str(path))
    np.testing.assert_allclose(loaded.cusp_c, srgb_boundary.cusp_c, atol=1e-6)
    np.testing.assert_allclose(loaded.cusp_l, srgb_boundary.cusp_l, atol=1e-6)
    np.testing.assert_allclose(loaded.floor_l, srgb_boundary.floor_l, atol=1e-6)
    np.testing.assert_allclose(loaded.ceiling_l, srgb_boundary.ceiling_l, atol=1e-6)


def test_bare_cusp_table_keeps_default_edges(tmp_path):
    path = tmp_path / "cusps.txt"
    path.write_text("".join(f"{h} 50 60\n" for h in range(HUE_BINS)))
    loaded = GamutBoundary.load(str(path))
    np.testing.assert_array_equal(loaded.floor_l, 0.0)
    np.testing.assert_array_equal(loaded.ceiling_l, 100.0)
    assert loaded.max_chroma(0.0, 30.0) == pytest.approx(25.0)


def test_load_rejects_short_table(tmp_path):
    path = tmp_path / "short.txt"
    path.write_text("0 10 50\n1 10 50\n")
    with pytest.raises(GamutError):
        GamutBoundary.load(str(path))


def test_chromaticities_file(tmp_path):
    path = tmp_path / "srgb.txt"
    path.write_text("# r g b w\n0.64 0.33\n0.30 0.60\n0.15 0.06\n0.3127 0.3290\n")
    assert load_chromaticities(str(path)) == SRGB
    assert resolve_target("SRGB") is SRGB


def test_chromaticities_file_needs_four_pairs(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0.64 0.33\n0.30 0.60\n")
    with pytest.raises(ConfigurationError):
        load_chromaticities(str(path))


def test_source_gamut_percentiles():
    chroma = np.arange(1.0, 101.0)
    img = lch_image(np.full(100, 50.0), chroma, np.full(100, 10.5))
    full = build_source_gamut(img, 1.0)
    assert full.chroma[10] == 100.0
    assert full.counts[10] == 100
    assert build_source_gamut(img, 0.99).chroma[10] == 99.0
    assert full.empty.sum() == HUE_BINS - 1
    np.testing.assert_array_equal(full.nonempty_bins, [10])


def test_source_gamut_lightness_extremes():
    lightness = np.linspace(-20.0, 180.0, 201)
    img = lch_image(lightness, np.full(201, 5.0), np.full(201, 200.2))
    src = build_source_gamut(img, 1.0)
    assert src.lightness_max[200] == 180.0
    assert src.lightness_min[200] == -20.0


def test_source_gamut_rejects_zero_percentile():
    img = lch_image([50.0], [10.0], [10.0])
    with pytest.raises(ValueError):
        build_source_gamut(img, 0.0)
