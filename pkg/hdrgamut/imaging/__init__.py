"""
hdrgamut - Imaging Package
==========================

Image buffers, bilateral base/detail decomposition, connected regions and
percentiles.
"""

from hdrgamut.imaging.buffer import ImagePlanar, XYZ_PLANES, LCH_PLANES, HUE_BINS, hue_bins
from hdrgamut.imaging.bilateral import (
    BaseDetail,
    bilateral_filter,
    decompose,
    decompose_divide,
    decompose_subtract,
)
from hdrgamut.imaging.regions import connected_regions, percentile, grouped_percentile
