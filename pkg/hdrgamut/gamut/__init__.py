"""
hdrgamut - Gamut Package
========================

Target gamut boundary descriptors and image source gamuts.
"""

from hdrgamut.gamut.boundary import (
    GamutSlice,
    GamutBoundary,
    build_target_boundary,
    brute_force_cusps,
    max_chroma_at,
    contains,
    contains_scaled,
)
from hdrgamut.gamut.source import SourceGamut, build_source_gamut
