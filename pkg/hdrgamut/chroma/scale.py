"""
hdrgamut - Per-Hue Scale Vector
===============================

For every hue slice, the smallest factor R on the grid 1 + k*d by which the
destination slice triangle has to be scaled so that it holds the slice's
retained (percentile-bounded) base-layer pixels.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..config.settings import CHROMA_SETTINGS
from ..gamut.boundary import GamutBoundary
from ..imaging.buffer import HUE_BINS, ImagePlanar, hue_bins
from ..imaging.regions import grouped_percentile
from .smoothing import smooth_scale_vector

logger = logging.getLogger("hdrgamut-chroma")

SCALE_METHODS = ("closed-form", "iterative")


@dataclass(frozen=True)
class ScaleVector:
    """Raw and smoothed per-hue scale factors."""

    raw: np.ndarray
    smoothed: np.ndarray
    d: float
    excluded: int = 0

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError(f"increment d must be positive, got {self.d}")
        for name in ("raw", "smoothed"):
            values = np.array(getattr(self, name), dtype=np.float64)
            if values.shape != (HUE_BINS,):
                raise ValueError(f"{name} must hold {HUE_BINS} values")
            if np.any(values < 1.0):
                raise ValueError(f"{name} scale factors must be >= 1")
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @classmethod
    def constant(cls, value: float, d: float = None) -> "ScaleVector":
        d = CHROMA_SETTINGS["increment"] if d is None else d
        values = np.full(HUE_BINS, float(value))
        return cls(raw=values, smoothed=values, d=d)

    @property
    def is_identity(self) -> bool:
        return bool(np.all(self.smoothed == 1.0))

    def smooth(self, method: str = None, window: int = None) -> "ScaleVector":
        return replace(self, smoothed=smooth_scale_vector(self.raw, method, window))

    def dump(self, path: str) -> None:
        with open(path, "w") as f:
            f.write(f"# hue raw smoothed (d={self.d}, excluded={self.excluded})\n")
            for h in range(HUE_BINS):
                f.write(f"{h} {self.raw[h]:.6f} {self.smoothed[h]:.6f}\n")


def _grid_steps(need: float, d: float, k_max: int) -> int:
    return int(min(max(math.ceil((need - 1.0) / d - 1e-9), 0), k_max))


def compute_scale_vector(img: ImagePlanar, dst: GamutBoundary, percentile: float, d: Optional[float] = None,
                         chroma: Optional[np.ndarray] = None, method: Optional[str] = None,
                         max_scale: Optional[float] = None) -> ScaleVector:
    """
    Per-slice scale factors for hue-specific chroma compression.

    Args:
        img: LCh image; its L and h planes locate the pixels
        dst: destination gamut boundary
        percentile: fraction of each slice's chroma range to honour
        d: grid increment
        chroma: base-layer chroma plane (defaults to img's C)
        method: "closed-form" or "iterative"; both return the same grid point
        max_scale: cap on R

    Returns:
        ScaleVector whose smoothed values equal the raw ones.
    """
    d = CHROMA_SETTINGS["increment"] if d is None else d
    method = CHROMA_SETTINGS["scale_method"] if method is None else method
    max_scale = CHROMA_SETTINGS["max_scale"] if max_scale is None else max_scale
    if method not in SCALE_METHODS:
        raise ValueError(f"Unknown scale method: {method}")
    if d <= 0:
        raise ValueError(f"increment d must be positive, got {d}")

    lightness = img.plane("L").ravel()
    hue = img.plane("h").ravel()
    chroma = (img.plane("C") if chroma is None else np.asarray(chroma, dtype=np.float64)).ravel()
    bins = hue_bins(hue)

    limits, _ = grouped_percentile(chroma, bins, percentile, HUE_BINS)
    retained = chroma <= limits[bins]
    need = dst.min_enclosing_scale(lightness, chroma, hue)
    unreachable = retained & ~np.isfinite(need)
    kept = np.nonzero(retained & np.isfinite(need))[0]

    k_max = max(int(math.ceil((max_scale - 1.0) / d - 1e-9)), 0)
    steps = np.zeros(HUE_BINS, dtype=np.int64)

    order = kept[np.argsort(bins[kept], kind="stable")]
    slice_bins, starts = np.unique(bins[order], return_index=True)
    for b, pixels in zip(slice_bins, np.split(order, starts[1:])):
        L, C, h = lightness[pixels], chroma[pixels], hue[pixels]

        def encloses(k: int) -> bool:
            return bool(np.all(dst.contains_scaled_mask(L, C, h, 1.0 + k * d)))

        if method == "iterative":
            k = 0
            while k < k_max and not encloses(k):
                k += 1
        else:
            k = _grid_steps(float(need[pixels].max()), d, k_max)
            while k > 0 and encloses(k - 1):
                k -= 1
            while k < k_max and not encloses(k):
                k += 1
        steps[b] = k
        if k == k_max and not encloses(k):
            logger.warning(f"Hue slice {b}: scale capped at {1.0 + k * d:.2f}")

    raw = 1.0 + steps * d
    excluded = int(unreachable.sum())
    if excluded:
        logger.debug(f"{excluded} retained pixels lie below their slice's lower edge and are left to clipping")
    logger.info(f"Scale vector ({method}): {int((steps > 0).sum())} slices compressed, max R {raw.max():.2f}")
    return ScaleVector(raw=raw, smoothed=raw, d=d, excluded=excluded)
