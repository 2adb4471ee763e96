"""
hdrgamut - RGB Clipping Baseline
================================
"""

import numpy as np

from ..color.colorspace import Chromaticities, apply_matrix, rgb_to_xyz_matrix, xyz_to_rgb_matrix
from ..imaging.buffer import XYZ_PLANES, ImagePlanar


def naive_rgb_clip(img: ImagePlanar, prims: Chromaticities, white_y: float = 100.0) -> ImagePlanar:
    """Clip each linear RGB channel of an XYZ image to [0, 1] independently"""
    rgb = apply_matrix(xyz_to_rgb_matrix(prims), img.stack(XYZ_PLANES) / white_y)
    xyz = apply_matrix(rgb_to_xyz_matrix(prims), np.clip(rgb, 0.0, 1.0)) * white_y
    return img.with_planes(X=xyz[..., 0], Y=xyz[..., 1], Z=xyz[..., 2])
