"""
hdrgamut - Source Gamut
=======================

Per-hue description of the colors present in an image: percentile-ranked
chroma and lightness extremes of every 1-degree hue bin.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..imaging.buffer import HUE_BINS, ImagePlanar, hue_bins
from ..imaging.regions import grouped_percentile

logger = logging.getLogger("hdrgamut-gamut")


@dataclass
class SourceGamut:
    """Per-bin chroma and lightness statistics of an image."""

    chroma: np.ndarray
    lightness_max: np.ndarray
    lightness_min: np.ndarray
    counts: np.ndarray
    percentile: float

    @property
    def empty(self) -> np.ndarray:
        return self.counts == 0

    @property
    def nonempty_bins(self) -> np.ndarray:
        return np.nonzero(self.counts)[0]


def build_source_gamut(img: ImagePlanar, percentile: float, chroma: Optional[np.ndarray] = None,
                       lightness: Optional[np.ndarray] = None) -> SourceGamut:
    """
    Build the source gamut of an LCh image.

    Args:
        img: image with L, C and h planes
        percentile: nearest-rank fraction in (0, 1]
        chroma: chroma plane to rank instead of img's C (e.g. a base layer)
        lightness: lightness plane to rank instead of img's L

    Returns:
        SourceGamut; empty bins hold zeros and are flagged by ``empty``.
    """
    if not 0.0 < percentile <= 1.0:
        raise ValueError(f"percentile must be in (0, 1], got {percentile}")

    chroma = img.plane("C") if chroma is None else chroma
    lightness = img.plane("L") if lightness is None else lightness
    bins = hue_bins(img.plane("h")).ravel()

    chroma_p, counts = grouped_percentile(chroma.ravel(), bins, percentile, HUE_BINS)
    l_max, _ = grouped_percentile(lightness.ravel(), bins, percentile, HUE_BINS)
    l_min, _ = grouped_percentile(lightness.ravel(), bins, percentile, HUE_BINS, lower=True)

    logger.debug(f"Source gamut: {int((counts > 0).sum())} non-empty hue bins at percentile {percentile}")
    return SourceGamut(chroma=chroma_p, lightness_max=l_max, lightness_min=l_min,
                       counts=counts, percentile=percentile)
