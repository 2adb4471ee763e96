"""
hdrgamut - Bilateral Filtering and Base/Detail Decomposition
============================================================

Gaussian-spatial, Gaussian-range bilateral filter in two flavours:

- ``direct``: brute force over a square kernel of radius truncate*sigma_s,
  renormalized at the image border. Slow; used as the reference.
- ``grid``: a bilateral grid. Pixels are splatted once into a volume that is
  decimated in space (when sigma_s is large) and sampled every sigma_r / 2
  in range; the volume is blurred and sliced back trilinearly.

The decompositions split a plane into a smooth base and a detail layer by
division (default), subtraction, or not at all.
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from ..config.settings import BILATERAL_SETTINGS

logger = logging.getLogger("hdrgamut-imaging")

DECOMPOSITIONS = ("divide", "subtract", "none")
FILTER_METHODS = ("auto", "direct", "grid")


def _kernel_radius(sigma: float, truncate: float, limit: int) -> int:
    return int(max(0, min(int(truncate * sigma + 0.5), limit)))


def _bilateral_direct(plane: np.ndarray, sigma_s: float, sigma_r: float, truncate: float) -> np.ndarray:
    height, width = plane.shape
    radius = _kernel_radius(sigma_s, truncate, max(height, width) - 1)
    padded = np.pad(plane, radius, mode="constant", constant_values=np.nan)

    numerator = np.zeros_like(plane)
    denominator = np.zeros_like(plane)
    range_scale = -1.0 / (2.0 * sigma_r * sigma_r)
    spatial_scale = -1.0 / (2.0 * sigma_s * sigma_s)

    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            shifted = padded[radius + dy:radius + dy + height, radius + dx:radius + dx + width]
            valid = ~np.isnan(shifted)
            values = np.where(valid, shifted, 0.0)
            diff = np.where(valid, shifted - plane, 0.0)
            weight = np.exp((dy * dy + dx * dx) * spatial_scale + diff * diff * range_scale) * valid
            numerator += weight * values
            denominator += weight

    return numerator / denominator


def _bilateral_grid(plane: np.ndarray, sigma_s: float, sigma_r: float, truncate: float,
                    level_step: float, grid_sigma: float) -> np.ndarray:
    """
    Splat the plane once into a coarse (row, column, level) volume of weights
    and weighted values, blur the volume along all three axes and read it
    back with one trilinear lookup per pixel.
    """
    height, width = plane.shape
    lo, hi = float(plane.min()), float(plane.max())
    step = level_step * sigma_r
    levels = int(math.ceil((hi - lo) / step)) + 2
    factor = max(1, min(int(sigma_s // grid_sigma), min(plane.shape) // 4))
    rows, cols = -(-height // factor), -(-width // factor)

    # box splat in space, hat splat in range
    position = (plane - lo) / step
    level = np.minimum(np.floor(position).astype(np.int64), levels - 2)
    upper = (position - level).ravel()
    cell_r = np.arange(height) // factor
    cell_c = np.arange(width) // factor
    cell = ((cell_r[:, np.newaxis] * cols + cell_c[np.newaxis, :]) * levels + level).ravel()
    values = plane.ravel()
    size = rows * cols * levels
    den = np.bincount(cell, 1.0 - upper, size) + np.bincount(cell + 1, upper, size)
    num = np.bincount(cell, (1.0 - upper) * values, size) + np.bincount(cell + 1, upper * values, size)
    volume = np.stack([num, den]).reshape(2, rows, cols, levels)

    # splatting and trilinear slicing widen each kernel; the blurs make up for it
    spatial = math.sqrt(max(sigma_s * sigma_s - (factor * factor - 1) / 4.0, sigma_s * sigma_s / 4.0)) / factor
    ranged = math.sqrt(1.0 / (level_step * level_step) - 1.0 / 3.0)
    for axis, sigma, radius in ((1, spatial, truncate), (2, spatial, truncate), (3, ranged, 4.0)):
        volume = ndimage.gaussian_filter1d(volume, sigma, axis=axis, mode="constant", cval=0.0, truncate=radius)

    centre = (factor - 1) / 2.0
    coords = np.empty((3, height, width))
    coords[0] = ((np.arange(height) - centre) / factor)[:, np.newaxis]
    coords[1] = ((np.arange(width) - centre) / factor)[np.newaxis, :]
    coords[2] = position
    num = ndimage.map_coordinates(volume[0], coords, order=1, mode="nearest")
    den = ndimage.map_coordinates(volume[1], coords, order=1, mode="nearest")
    logger.debug(f"Bilateral grid: {rows}x{cols}x{levels} cells, decimation x{factor}")
    result = np.where(den > 1e-300, num / np.where(den > 1e-300, den, 1.0), plane)
    return np.clip(result, lo, hi)


def bilateral_filter(plane: np.ndarray, sigma_s: float, sigma_r: float, method: str = "auto",
                     truncate: Optional[float] = None) -> np.ndarray:
    """
    Bilateral filter of a single-channel plane.

    Args:
        plane: 2-D array
        sigma_s: spatial standard deviation in pixels
        sigma_r: range standard deviation in plane units
        method: ``direct``, ``grid`` or ``auto`` (grid)
        truncate: kernel radius in units of sigma_s

    Returns:
        Filtered plane; every value lies within [min, max] of the input.
    """
    if sigma_s <= 0 or sigma_r <= 0:
        raise ValueError(f"bilateral sigmas must be positive (sigma_s={sigma_s}, sigma_r={sigma_r})")
    if method not in FILTER_METHODS:
        raise ValueError(f"Unknown bilateral method: {method}")

    plane = np.asarray(plane, dtype=np.float64)
    if plane.size == 0 or plane.min() == plane.max():
        return plane.copy()

    truncate = BILATERAL_SETTINGS["truncate"] if truncate is None else truncate
    if method == "direct":
        return _bilateral_direct(plane, sigma_s, sigma_r, truncate)
    return _bilateral_grid(
        plane, sigma_s, sigma_r, truncate,
        level_step=BILATERAL_SETTINGS["grid_level_step"],
        grid_sigma=BILATERAL_SETTINGS["grid_sigma_px"],
    )


def default_sigmas(plane: np.ndarray) -> Tuple[float, float]:
    """sigma_s = 0.2 max(width, height), sigma_r = 0.05 max(plane)"""
    sigma_s = BILATERAL_SETTINGS["sigma_s_fraction"] * max(plane.shape)
    sigma_r = BILATERAL_SETTINGS["sigma_r_fraction"] * float(np.max(plane)) if plane.size else 0.0
    return sigma_s, sigma_r


@dataclass
class BaseDetail:
    """Base and detail layers of a plane."""

    base: np.ndarray
    detail: np.ndarray
    method: str = "divide"

    def recombine(self, base: Optional[np.ndarray] = None) -> np.ndarray:
        """Re-inject the detail into a (possibly modified) base"""
        base = self.base if base is None else base
        if self.method == "divide":
            return base * self.detail
        if self.method == "subtract":
            return np.maximum(base + self.detail, 0.0)
        return np.array(base, dtype=np.float64, copy=True)


def _base_layer(plane: np.ndarray, sigma_s: Optional[float], sigma_r: Optional[float],
                filter_method: str) -> np.ndarray:
    default_s, default_r = default_sigmas(plane)
    sigma_s = default_s if sigma_s is None else sigma_s
    sigma_r = default_r if sigma_r is None else sigma_r
    if sigma_r <= 0 or sigma_s <= 0:
        # all-zero (or non-positive) plane: nothing to smooth
        return plane.copy()
    return bilateral_filter(plane, sigma_s, sigma_r, method=filter_method)


def decompose_divide(plane: np.ndarray, sigma_s: Optional[float] = None, sigma_r: Optional[float] = None,
                     epsilon: Optional[float] = None, filter_method: str = "auto") -> BaseDetail:
    """
    Base = bilateral(plane); detail = plane / base where base >= epsilon, else 1.
    """
    plane = np.asarray(plane, dtype=np.float64)
    epsilon = BILATERAL_SETTINGS["epsilon"] if epsilon is None else epsilon
    base = _base_layer(plane, sigma_s, sigma_r, filter_method)
    usable = base >= epsilon
    detail = np.ones_like(plane)
    np.divide(plane, base, out=detail, where=usable)
    return BaseDetail(base=base, detail=detail, method="divide")


def decompose_subtract(plane: np.ndarray, sigma_s: Optional[float] = None, sigma_r: Optional[float] = None,
                       filter_method: str = "auto") -> BaseDetail:
    """Base = bilateral(plane); detail = plane - base"""
    plane = np.asarray(plane, dtype=np.float64)
    base = _base_layer(plane, sigma_s, sigma_r, filter_method)
    return BaseDetail(base=base, detail=plane - base, method="subtract")


def decompose(plane: np.ndarray, method: str = "divide", **kwargs) -> BaseDetail:
    """Dispatch on the decomposition method name"""
    if method == "divide":
        return decompose_divide(plane, **kwargs)
    if method == "subtract":
        kwargs.pop("epsilon", None)
        return decompose_subtract(plane, **kwargs)
    if method == "none":
        plane = np.asarray(plane, dtype=np.float64)
        return BaseDetail(base=plane.copy(), detail=np.ones_like(plane), method="none")
    raise ValueError(f"Unknown decomposition: {method}")
