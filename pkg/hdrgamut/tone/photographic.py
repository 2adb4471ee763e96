"""
hdrgamut - Photographic Operator
================================

Global photographic tone reproduction on luminance. Chromaticities are kept,
and the result is normalised so that its brightest pixel has Y = 100.
"""

import logging
from typing import Optional

import numpy as np

from ..color.colorspace import xyy_to_xyz, xyz_to_xyy
from ..config.settings import LIGHTNESS_SETTINGS, PIPELINE_SETTINGS
from ..errors import ToneMappingError
from ..imaging.buffer import XYZ_PLANES, ImagePlanar

logger = logging.getLogger("hdrgamut-tone")

ANCHOR_MODES = ("logavg50", "none")


def log_average(luminance: np.ndarray) -> float:
    """Geometric mean of the strictly positive luminances"""
    luminance = np.asarray(luminance, dtype=np.float64)
    positive = luminance[luminance > 0.0]
    if positive.size == 0:
        raise ToneMappingError("black image")
    return float(np.exp(np.mean(np.log(positive))))


def photographic_curve(luminance: np.ndarray, key: float, log_avg: float,
                       l_white: Optional[float] = None) -> np.ndarray:
    """
    L_m = key / log_avg * Y; L_d = L_m (1 + L_m / L_white^2) / (1 + L_m).

    L_white defaults to the largest L_m.
    """
    scaled = key / log_avg * np.maximum(np.asarray(luminance, dtype=np.float64), 0.0)
    l_white = float(scaled.max()) if l_white is None else l_white
    return scaled * (1.0 + scaled / (l_white * l_white)) / (1.0 + scaled)


def photographic_tmo(img: ImagePlanar, key: Optional[float] = None,
                     display_white_y: Optional[float] = None) -> ImagePlanar:
    """
    Tone map an XYZ image with the global photographic operator.

    Args:
        img: image with X, Y and Z planes
        key: exposure key a (> 0)
        display_white_y: luminance of the brightest output pixel

    Returns:
        XYZ image whose maximum Y equals display_white_y.

    Raises:
        ToneMappingError: when no pixel has positive luminance
    """
    key = PIPELINE_SETTINGS["key"] if key is None else key
    display_white_y = PIPELINE_SETTINGS["display_white_y"] if display_white_y is None else display_white_y
    if key <= 0:
        raise ValueError(f"key must be positive, got {key}")

    xyy = xyz_to_xyy(img.stack(XYZ_PLANES))
    avg = log_average(xyy[..., 2])
    displayed = photographic_curve(xyy[..., 2], key, avg)
    xyy[..., 2] = displayed * (display_white_y / displayed.max())

    xyz = xyy_to_xyz(xyy)
    logger.info(f"Photographic operator: log-average luminance {avg:.6g}, key {key}")
    return img.with_planes(X=xyz[..., 0], Y=xyz[..., 1], Z=xyz[..., 2])


def anchor_luminance(lightness: float = None) -> float:
    """Relative luminance Y/Y_n whose L* is the given lightness"""
    lightness = LIGHTNESS_SETTINGS["anchor_lightness"] if lightness is None else lightness
    return ((lightness + 16.0) / 116.0) ** 3


def anchor_hdr(img: ImagePlanar, mode: Optional[str] = None, lightness: Optional[float] = None) -> ImagePlanar:
    """
    Scale HDR XYZ so that its log-average luminance lands on L* = lightness
    against a unit white. Mode ``none`` returns the image unchanged.
    """
    mode = PIPELINE_SETTINGS["anchor"] if mode is None else mode
    if mode == "none":
        return img
    if mode != "logavg50":
        raise ValueError(f"Unknown anchor mode: {mode}")

    gain = anchor_luminance(lightness) / log_average(img.plane("Y"))
    logger.debug(f"HDR anchor gain {gain:.6g}")
    return img.with_planes(**{name: img.plane(name) * gain for name in XYZ_PLANES})
