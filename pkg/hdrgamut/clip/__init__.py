"""
hdrgamut - Clip Package
=======================

Final gamut clipping and the per-channel RGB baseline.
"""

from hdrgamut.clip.clipping import CLIP_MODES, ClipPolicy, ClipReport, clip_pixel, clip_points, clip_image
from hdrgamut.clip.baseline import naive_rgb_clip
