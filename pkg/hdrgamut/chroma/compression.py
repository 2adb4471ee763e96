"""
hdrgamut - Chroma Compression
=============================

Hue-specific compression divides each pixel's base-layer chroma by the
smoothed scale factor of its hue slice; global compression multiplies all
base-layer chroma by the smallest destination/source cusp ratio. Both
re-inject the detail layer and never touch lightness or hue.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config.settings import BILATERAL_SETTINGS
from ..gamut.boundary import GamutBoundary
from ..gamut.source import SourceGamut, build_source_gamut
from ..imaging.bilateral import BaseDetail, decompose
from ..imaging.buffer import ImagePlanar, hue_bins
from .policy import PercentilePolicy, select_percentile
from .scale import ScaleVector, compute_scale_vector

logger = logging.getLogger("hdrgamut-chroma")


@dataclass
class ChromaResult:
    """Output of a chroma compression stage."""

    image: ImagePlanar
    percentile: float
    decomposition: BaseDetail
    scale_vector: Optional[ScaleVector] = None
    global_scale: Optional[float] = None


def decompose_chroma(img: ImagePlanar, decomposition: Optional[str] = None,
                     filter_method: Optional[str] = None) -> BaseDetail:
    decomposition = BILATERAL_SETTINGS["decomposition"] if decomposition is None else decomposition
    filter_method = BILATERAL_SETTINGS["method"] if filter_method is None else filter_method
    if decomposition == "none":
        return decompose(img.plane("C"), "none")
    return decompose(img.plane("C"), decomposition, filter_method=filter_method)


def apply_hue_specific(img: ImagePlanar, scale: ScaleVector,
                       base_detail: Optional[BaseDetail] = None) -> ImagePlanar:
    """
    Divide base chroma by R'_h of each pixel's slice and re-inject detail.

    A unit scale vector returns the image untouched.
    """
    if scale.is_identity:
        return img
    base_detail = decompose_chroma(img) if base_detail is None else base_detail
    factors = scale.smoothed[hue_bins(img.plane("h"))]
    return img.with_planes(C=base_detail.recombine(base_detail.base / factors))


def global_scale(src: SourceGamut, dst: GamutBoundary) -> float:
    """Minimum destination/source cusp-chroma ratio over non-empty slices (1.0 if none)"""
    bins = src.nonempty_bins
    bins = bins[src.chroma[bins] > 0.0]
    if bins.size == 0:
        return 1.0
    return float(np.min(dst.cusp_c[bins] / src.chroma[bins]))


def apply_global(img: ImagePlanar, src: SourceGamut, dst: GamutBoundary,
                 base_detail: Optional[BaseDetail] = None) -> ImagePlanar:
    s = global_scale(src, dst)
    if s >= 1.0:
        logger.debug(f"Global cusp ratio {s:.4f} >= 1; no compression")
        return img
    base_detail = decompose_chroma(img) if base_detail is None else base_detail
    return img.with_planes(C=base_detail.recombine(base_detail.base * s))


def hue_specific_compression(img: ImagePlanar, dst: GamutBoundary, policy: Optional[PercentilePolicy] = None,
                             decomposition: Optional[str] = None, filter_method: Optional[str] = None,
                             d: Optional[float] = None, scale_method: Optional[str] = None,
                             smoothing: Optional[str] = None, window: Optional[int] = None,
                             max_scale: Optional[float] = None) -> ChromaResult:
    """
    Full hue-specific stage: decompose, choose the percentile, compute and
    smooth R, then apply it.
    """
    policy = PercentilePolicy() if policy is None else policy
    base_detail = decompose_chroma(img, decomposition, filter_method)
    percentile = select_percentile(img, dst, policy)
    raw = compute_scale_vector(img, dst, percentile, d=d, chroma=base_detail.base,
                               method=scale_method, max_scale=max_scale)
    scale = raw.smooth(smoothing, window)
    result = apply_hue_specific(img, scale, base_detail)
    logger.info(f"Hue-specific chroma compression at percentile {percentile}: "
                f"mean R' {scale.smoothed.mean():.3f}")
    return ChromaResult(image=result, percentile=percentile, decomposition=base_detail, scale_vector=scale)


def global_compression(img: ImagePlanar, dst: GamutBoundary, policy: Optional[PercentilePolicy] = None,
                       decomposition: Optional[str] = None,
                       filter_method: Optional[str] = None) -> ChromaResult:
    policy = PercentilePolicy() if policy is None else policy
    base_detail = decompose_chroma(img, decomposition, filter_method)
    percentile = select_percentile(img, dst, policy)
    src = build_source_gamut(img, percentile, chroma=base_detail.base)
    s = global_scale(src, dst)
    result = apply_global(img, src, dst, base_detail)
    logger.info(f"Global chroma compression at percentile {percentile}: scale {min(s, 1.0):.4f}")
    return ChromaResult(image=result, percentile=percentile, decomposition=base_detail,
                        global_scale=min(s, 1.0))


def compress_chroma(img: ImagePlanar, dst: GamutBoundary, method: str = "hue-specific",
                    policy: Optional[PercentilePolicy] = None, **options) -> Optional[ChromaResult]:
    """Dispatch on "hue-specific", "global" or "none" (returns None)"""
    if method == "none":
        return None
    if method == "hue-specific":
        return hue_specific_compression(img, dst, policy, **options)
    if method == "global":
        allowed = {k: v for k, v in options.items() if k in ("decomposition", "filter_method")}
        return global_compression(img, dst, policy, **allowed)
    raise ValueError(f"Unknown chroma method: {method}")
