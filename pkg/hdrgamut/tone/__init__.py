"""
hdrgamut - Tone Package
=======================

Photographic luminance compression and cusp-aligned lightness compression.
"""

from hdrgamut.tone.curves import COMPRESSION_FUNCTIONS, compression_function
from hdrgamut.tone.photographic import anchor_hdr, log_average, photographic_curve, photographic_tmo
from hdrgamut.tone.lightness import (
    TmoChoice,
    LightnessCurveParams,
    LightnessTable,
    CuspToneResult,
    ToneCurve,
    fit_lightness_params,
    fit_lightness_table,
    compress_lightness,
    cusp_aligned_tmo,
    tone_curve_samples,
    dump_tone_curves,
)
