"""
hdrgamut - Percentile Policy
============================

Chooses how much of the chroma (or lightness) range a compression has to
honour. When out-of-gamut pixels are spread over the image an aggressive
percentile is used; when they gather in a few connected regions the gentle
one is used so that clipping, not compression, deals with them.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config.settings import CHROMA_SETTINGS
from ..gamut.boundary import GamutBoundary
from ..imaging.buffer import ImagePlanar
from ..imaging.regions import connected_regions

logger = logging.getLogger("hdrgamut-chroma")


class PercentilePolicy(BaseModel):
    """Percentiles for spread and concentrated out-of-gamut content."""

    model_config = ConfigDict(frozen=True)

    spread_percentile: float = Field(CHROMA_SETTINGS["spread_percentile"], gt=0.0, le=1.0)
    concentrated_percentile: float = Field(CHROMA_SETTINGS["concentrated_percentile"], gt=0.0, le=1.0)
    region_ratio_threshold: float = Field(CHROMA_SETTINGS["region_ratio_threshold"], gt=0.0)


def out_of_gamut_mask(img: ImagePlanar, dst: GamutBoundary) -> np.ndarray:
    return ~dst.contains_mask(img.plane("L"), img.plane("C"), img.plane("h"))


def select_percentile(img: ImagePlanar, dst: GamutBoundary, policy: PercentilePolicy) -> float:
    """
    Pick the percentile from the spread of out-of-gamut pixels.

    Returns 1.0 when nothing is out of gamut.
    """
    mask = out_of_gamut_mask(img, dst)
    regions, pixels = connected_regions(mask)
    if pixels == 0:
        logger.info("No out-of-gamut pixels; using percentile 1.0")
        return 1.0

    ratio = regions / pixels
    if ratio < policy.region_ratio_threshold:
        chosen = policy.concentrated_percentile
        kind = "concentrated"
    else:
        chosen = policy.spread_percentile
        kind = "spread"
    logger.info(f"{pixels} out-of-gamut pixels in {regions} regions (ratio {ratio:.4f}, {kind}); "
                f"percentile {chosen}")
    return chosen
