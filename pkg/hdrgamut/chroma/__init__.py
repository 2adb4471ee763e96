"""
hdrgamut - Chroma Package
=========================

Hue-specific and global chroma compression.
"""

from hdrgamut.chroma.policy import PercentilePolicy, select_percentile, out_of_gamut_mask
from hdrgamut.chroma.scale import ScaleVector, compute_scale_vector
from hdrgamut.chroma.smoothing import SMOOTHING_METHODS, smooth_scale_vector
from hdrgamut.chroma.compression import (
    ChromaResult,
    apply_global,
    apply_hue_specific,
    compress_chroma,
    global_scale,
)
