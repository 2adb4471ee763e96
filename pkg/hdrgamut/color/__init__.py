"""
hdrgamut - Color Package
========================

Exact conversions among linear RGB, XYZ, LAB/LCh and IPT.
"""

from hdrgamut.color.colorspace import (
    D65_WHITE,
    Chromaticities,
    LChColor,
    rgb_to_xyz_matrix,
    xyz_to_rgb_matrix,
    xyz_to_lch,
    lch_to_xyz,
    xyz_to_ipt_cyl,
    ipt_cyl_to_xyz,
    srgb_encode,
    srgb_decode,
)
