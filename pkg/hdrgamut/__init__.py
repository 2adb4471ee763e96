"""
hdrgamut - HDR Gamut and Tone Management
========================================

Tone mapping, content-adaptive chroma compression, cusp-aligned lightness
compression and gamut clipping for HDR images, producing display-referred
results that lie inside a target RGB gamut without shifting hue.
"""

__version__ = "0.3.0"
