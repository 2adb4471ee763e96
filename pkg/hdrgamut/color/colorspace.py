"""
hdrgamut - Color Space Conversions
==================================

Conversions among linear RGB, XYZ, CIE LAB/LCh and cylindrical IPT, plus the
sRGB transfer functions. All functions are vectorized over a trailing axis
of length 3 and are pure.

LAB is applied to unbounded ratios: lightness exceeds 100 whenever Y > Y_n,
which is how HDR source gamuts are described. Hue is kept in degrees and
every trigonometric call lives in this module.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from ..errors import GamutError

logger = logging.getLogger("hdrgamut-color")

XY = Tuple[float, float]

D65_WHITE: XY = (0.3127, 0.3290)

# CIE LAB constants
_DELTA = 6.0 / 29.0
_DELTA3 = _DELTA ** 3
_LINEAR_SLOPE = 1.0 / (3.0 * _DELTA * _DELTA)
_LINEAR_OFFSET = 4.0 / 29.0

# Ebner-Fairchild IPT
_XYZ_TO_LMS = np.array([
    [0.4002, 0.7075, -0.0807],
    [-0.2280, 1.1500, 0.0612],
    [0.0000, 0.0000, 0.9184],
])
_LMS_TO_IPT = np.array([
    [0.4000, 0.4000, 0.2000],
    [4.4550, -4.8510, 0.3960],
    [0.8056, 0.3572, -1.1628],
])
_IPT_EXPONENT = 0.43

# IEC 61966-2-1
_SRGB_LINEAR_LIMIT = 0.0031308
_SRGB_ENCODED_LIMIT = 0.04045


class LChColor(NamedTuple):
    """A single color in cylindrical LAB coordinates (hue in degrees)."""

    L: float
    C: float
    h: float


@dataclass(frozen=True)
class Chromaticities:
    """xy chromaticities of three RGB primaries and the white point."""

    red: XY
    green: XY
    blue: XY
    white: XY = D65_WHITE

    def __post_init__(self):
        for name in ("red", "green", "blue", "white"):
            x, y = getattr(self, name)
            if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
                raise GamutError(f"{name} chromaticity {x, y} outside (0, 1)")
        (rx, ry), (gx, gy), (bx, by) = self.red, self.green, self.blue
        area = 0.5 * abs((gx - rx) * (by - ry) - (bx - rx) * (gy - ry))
        if area < 1e-12:
            raise GamutError("degenerate primaries")

    def white_xyz(self, white_y: float = 1.0) -> np.ndarray:
        return xy_to_xyz(self.white, white_y)


def xy_to_xyz(xy: XY, Y: float = 1.0) -> np.ndarray:
    """XYZ of a chromaticity at luminance Y"""
    x, y = xy
    return np.array([x / y * Y, Y, (1.0 - x - y) / y * Y])


def rgb_to_xyz_matrix(prims: Chromaticities) -> np.ndarray:
    """
    3x3 matrix taking linear RGB to XYZ.

    RGB (1, 1, 1) maps to the white point with Y = 1.
    """
    columns = np.array([xy_to_xyz(p) for p in (prims.red, prims.green, prims.blue)]).T
    if abs(np.linalg.det(columns)) < 1e-12:
        raise GamutError("degenerate primaries")
    scale = np.linalg.solve(columns, xy_to_xyz(prims.white))
    return columns * scale


def xyz_to_rgb_matrix(prims: Chromaticities) -> np.ndarray:
    return np.linalg.inv(rgb_to_xyz_matrix(prims))


def apply_matrix(matrix: np.ndarray, values) -> np.ndarray:
    """Apply a 3x3 matrix over the trailing axis"""
    return np.asarray(values, dtype=np.float64) @ matrix.T


def _lab_f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA3, np.cbrt(t), t * _LINEAR_SLOPE + _LINEAR_OFFSET)


def _lab_f_inverse(f: np.ndarray) -> np.ndarray:
    return np.where(f > _DELTA, f ** 3, (f - _LINEAR_OFFSET) / _LINEAR_SLOPE)


def _white(white_y: float, white: XY) -> np.ndarray:
    if white_y <= 0:
        raise GamutError(f"reference white luminance must be positive, got {white_y}")
    return xy_to_xyz(white, white_y)


def xyz_to_lab(xyz, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=np.float64)
    f = _lab_f(xyz / _white(white_y, white))
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def lab_to_xyz(lab, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    return _lab_f_inverse(np.stack([fx, fy, fz], axis=-1)) * _white(white_y, white)


def to_cylindrical(lightness, a, b) -> np.ndarray:
    """(L, a, b) -> (L, C, h) with h in degrees, normalized to [0, 360)"""
    chroma = np.hypot(a, b)
    hue = np.mod(np.degrees(np.arctan2(b, a)), 360.0)
    # mod can round a tiny negative angle up to exactly 360
    hue = np.where(hue >= 360.0, 0.0, hue)
    return np.stack([lightness, chroma, hue], axis=-1)


def from_cylindrical(lightness, chroma, hue) -> np.ndarray:
    radians = np.radians(hue)
    return np.stack([lightness, chroma * np.cos(radians), chroma * np.sin(radians)], axis=-1)


def xyz_to_lch(xyz, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    """XYZ -> (L, C, h); L may exceed 100 when Y > Y_n"""
    lab = xyz_to_lab(xyz, white_y, white)
    return to_cylindrical(lab[..., 0], lab[..., 1], lab[..., 2])


def lch_to_xyz(lch, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    lch = np.asarray(lch, dtype=np.float64)
    lab = from_cylindrical(lch[..., 0], lch[..., 1], lch[..., 2])
    return lab_to_xyz(lab, white_y, white)


def rgb_to_lch(rgb, prims: Chromaticities, white_y: float = 1.0) -> np.ndarray:
    """Linear RGB (white = 1) -> LCh against the primaries' white point"""
    xyz = apply_matrix(rgb_to_xyz_matrix(prims), rgb) * white_y
    return xyz_to_lch(xyz, white_y, prims.white)


def lch_to_rgb(lch, prims: Chromaticities, white_y: float = 1.0) -> np.ndarray:
    xyz = lch_to_xyz(lch, white_y, prims.white) / white_y
    return apply_matrix(xyz_to_rgb_matrix(prims), xyz)


def xyz_to_xyy(xyz) -> np.ndarray:
    """XYZ -> (x, y, Y); black pixels get the chromaticity (0, 0)"""
    xyz = np.asarray(xyz, dtype=np.float64)
    total = xyz.sum(axis=-1)
    safe = np.where(total != 0.0, total, 1.0)
    x = np.where(total != 0.0, xyz[..., 0] / safe, 0.0)
    y = np.where(total != 0.0, xyz[..., 1] / safe, 0.0)
    return np.stack([x, y, xyz[..., 1]], axis=-1)


def xyy_to_xyz(xyy) -> np.ndarray:
    xyy = np.asarray(xyy, dtype=np.float64)
    x, y, Y = xyy[..., 0], xyy[..., 1], xyy[..., 2]
    safe = np.where(y != 0.0, y, 1.0)
    X = np.where(y != 0.0, x * Y / safe, 0.0)
    Z = np.where(y != 0.0, (1.0 - x - y) * Y / safe, 0.0)
    return np.stack([X, Y, Z], axis=-1)


def _signed_power(values: np.ndarray, exponent: float) -> np.ndarray:
    return np.sign(values) * np.abs(values) ** exponent


def _white_lms(white: XY) -> np.ndarray:
    return xy_to_xyz(white) @ _XYZ_TO_LMS.T


def xyz_to_ipt(xyz, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    """
    XYZ -> IPT.

    XYZ is normalized by Y_n and the cone responses by those of the white,
    which puts the configured white exactly on the achromatic axis.
    """
    xyz = np.asarray(xyz, dtype=np.float64) / white_y
    lms = (xyz @ _XYZ_TO_LMS.T) / _white_lms(white)
    return _signed_power(lms, _IPT_EXPONENT) @ _LMS_TO_IPT.T


def ipt_to_xyz(ipt, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    ipt = np.asarray(ipt, dtype=np.float64)
    lms_prime = ipt @ np.linalg.inv(_LMS_TO_IPT).T
    lms = _signed_power(lms_prime, 1.0 / _IPT_EXPONENT) * _white_lms(white)
    return (lms @ np.linalg.inv(_XYZ_TO_LMS).T) * white_y


def xyz_to_ipt_cyl(xyz, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    """XYZ -> (I, C_ipt, h_ipt) with hue in degrees"""
    ipt = xyz_to_ipt(xyz, white_y, white)
    return to_cylindrical(ipt[..., 0], ipt[..., 1], ipt[..., 2])


def ipt_cyl_to_xyz(ich, white_y: float = 1.0, white: XY = D65_WHITE) -> np.ndarray:
    ich = np.asarray(ich, dtype=np.float64)
    return ipt_to_xyz(from_cylindrical(ich[..., 0], ich[..., 1], ich[..., 2]), white_y, white)


def srgb_encode(linear) -> np.ndarray:
    """IEC sRGB transfer; input expected in [0, 1]"""
    linear = np.asarray(linear, dtype=np.float64)
    power = 1.055 * np.power(np.maximum(linear, _SRGB_LINEAR_LIMIT), 1.0 / 2.4) - 0.055
    return np.where(linear <= _SRGB_LINEAR_LIMIT, 12.92 * linear, power)


def srgb_decode(encoded) -> np.ndarray:
    encoded = np.asarray(encoded, dtype=np.float64)
    power = np.power((np.maximum(encoded, _SRGB_ENCODED_LIMIT) + 0.055) / 1.055, 2.4)
    return np.where(encoded <= _SRGB_ENCODED_LIMIT, encoded / 12.92, power)
