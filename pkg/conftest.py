"""
hdrgamut - Test Fixtures
========================

Shared fixtures: a session-wide sRGB boundary, a synthetic triangle
boundary with round numbers, and small image builders.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hdrgamut.config.gamuts import SRGB
from hdrgamut.gamut.boundary import GamutBoundary, build_target_boundary
from hdrgamut.imaging.buffer import HUE_BINS, LCH_PLANES, XYZ_PLANES, ImagePlanar

# the autouse fixture below is function scoped and stateless
settings.register_profile("hdrgamut", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("hdrgamut")


def lch_image(L, C, h) -> ImagePlanar:
    """LCh image from equally shaped arrays (1-D inputs give a single row)"""
    L, C, h = (np.atleast_1d(np.asarray(v, dtype=np.float64)) for v in (L, C, h))
    L, C, h = np.broadcast_arrays(L, C, h)
    if L.ndim == 1:
        L, C, h = L[np.newaxis], C[np.newaxis], h[np.newaxis]
    return ImagePlanar.from_array(np.stack([L, C, h], axis=-1), LCH_PLANES)


def xyz_image(xyz) -> ImagePlanar:
    xyz = np.asarray(xyz, dtype=np.float64)
    if xyz.ndim == 2:
        xyz = xyz[np.newaxis]
    return ImagePlanar.from_array(xyz, XYZ_PLANES)


@pytest.fixture(scope="session")
def srgb_boundary() -> GamutBoundary:
    return build_target_boundary(SRGB, 128)


@pytest.fixture
def flat_boundary() -> GamutBoundary:
    """Every slice has its cusp at (C, L) = (50, 60)"""
    return GamutBoundary(cusp_c=np.full(HUE_BINS, 50.0), cusp_l=np.full(HUE_BINS, 60.0))


@pytest.fixture(autouse=True)
def no_user_configuration(monkeypatch):
    """Keep ~/.hdrgamut out of every test"""
    monkeypatch.setattr("hdrgamut.cli.pipeline.get_user_configuration", lambda *args, **kwargs: {})


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
