"""
hdrgamut - Gamut Clipping
=========================

Maps residual out-of-gamut pixels onto the destination slice triangle.
Chroma-only clipping keeps lightness, lightness-only clipping keeps chroma
(falling back to the cusp when no boundary point has that chroma), and the
interpolated mode blends the two targets. Pixels already in gamut are never
modified.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..color.colorspace import LChColor
from ..config.settings import CLIP_SETTINGS
from ..gamut.boundary import GamutBoundary
from ..imaging.buffer import ImagePlanar

logger = logging.getLogger("hdrgamut-clip")

CLIP_MODES = ("chroma-only", "lightness-only", "interpolated")
_MODE_ALIASES = {"chroma": "chroma-only", "lightness": "lightness-only", "interp": "interpolated"}


class ClipPolicy(BaseModel):
    """Clipping direction and interpolation weight."""

    model_config = ConfigDict(frozen=True)

    mode: str = CLIP_SETTINGS["mode"]
    weight: float = Field(CLIP_SETTINGS["weight"], ge=0.0, le=1.0)

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        value = _MODE_ALIASES.get(value, value)
        if value not in CLIP_MODES:
            raise ValueError(f"clip mode must be one of {', '.join(CLIP_MODES)}")
        return value


@dataclass
class ClipReport:
    """What clipping did to an image."""

    moved: int
    total: int
    mean_chroma_shift: float = 0.0
    max_chroma_shift: float = 0.0
    mean_lightness_shift: float = 0.0
    max_lightness_shift: float = 0.0
    mask: np.ndarray = field(default=None, repr=False)

    @property
    def moved_fraction(self) -> float:
        return self.moved / self.total if self.total else 0.0

    def to_text(self) -> str:
        return "\n".join([
            f"pixels_moved {self.moved}",
            f"pixels_total {self.total}",
            f"moved_fraction {self.moved_fraction:.6f}",
            f"mean_chroma_shift {self.mean_chroma_shift:.6f}",
            f"max_chroma_shift {self.max_chroma_shift:.6f}",
            f"mean_lightness_shift {self.mean_lightness_shift:.6f}",
            f"max_lightness_shift {self.max_lightness_shift:.6f}",
        ]) + "\n"


def clip_targets(dst: GamutBoundary, lightness: np.ndarray, chroma: np.ndarray,
                 hue: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Chroma-only and lightness-only clip targets.

    Returns:
        (L_clipC, C_clipC, L_clipL, C_clipL)
    """
    cusp_c, cusp_l, floor_l, ceiling_l = dst.edges(hue)

    l_c = np.clip(lightness, 0.0, 100.0)
    c_c = dst.max_chroma(hue, l_c)

    reachable = chroma <= cusp_c
    at_chroma = np.minimum(chroma, cusp_c)
    lowest = np.maximum(floor_l + at_chroma * (cusp_l - floor_l) / cusp_c, 0.0)
    highest = np.minimum(ceiling_l - at_chroma * (ceiling_l - cusp_l) / cusp_c, 100.0)
    l_l = np.where(reachable, np.clip(lightness, lowest, highest), cusp_l)
    c_l = np.where(reachable, chroma, cusp_c)
    return l_c, c_c, l_l, c_l


def clip_points(dst: GamutBoundary, lightness, chroma, hue, policy: ClipPolicy) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised clip; in-gamut points come back unchanged"""
    lightness = np.asarray(lightness, dtype=np.float64)
    chroma = np.asarray(chroma, dtype=np.float64)
    hue = np.asarray(hue, dtype=np.float64)
    inside = dst.contains_mask(lightness, chroma, hue)

    l_c, c_c, l_l, c_l = clip_targets(dst, lightness, chroma, hue)
    if policy.mode == "chroma-only":
        new_l, new_c = l_c, c_c
    elif policy.mode == "lightness-only":
        new_l, new_c = l_l, c_l
    else:
        t = policy.weight
        new_l = (1.0 - t) * l_c + t * l_l
        new_c = (1.0 - t) * c_c + t * c_l
    return np.where(inside, lightness, new_l), np.where(inside, chroma, new_c)


def clip_pixel(p: LChColor, dst: GamutBoundary, policy: ClipPolicy = None) -> LChColor:
    policy = ClipPolicy() if policy is None else policy
    if dst.contains_mask(p.L, p.C, p.h):
        return p
    L, C = clip_points(dst, p.L, p.C, p.h, policy)
    return LChColor(float(L), float(C), p.h)


def clip_image(img: ImagePlanar, dst: GamutBoundary, policy: ClipPolicy = None) -> Tuple[ImagePlanar, ClipReport]:
    """
    Clip every out-of-gamut pixel of an LCh image.

    Returns:
        The clipped image (the input itself when nothing moved) and a report.
    """
    policy = ClipPolicy() if policy is None else policy
    lightness, chroma, hue = img.plane("L"), img.plane("C"), img.plane("h")
    moved = ~dst.contains_mask(lightness, chroma, hue)
    count = int(moved.sum())
    if count == 0:
        logger.info("Gamut clipping: no pixels out of gamut")
        return img, ClipReport(moved=0, total=img.pixel_count, mask=moved)

    new_l, new_c = clip_points(dst, lightness, chroma, hue, policy)
    d_l = np.abs(new_l - lightness)[moved]
    d_c = np.abs(new_c - chroma)[moved]
    report = ClipReport(
        moved=count, total=img.pixel_count,
        mean_chroma_shift=float(d_c.mean()), max_chroma_shift=float(d_c.max()),
        mean_lightness_shift=float(d_l.mean()), max_lightness_shift=float(d_l.max()),
        mask=moved,
    )
    logger.info(f"Gamut clipping ({policy.mode}): moved {count} pixels, "
                f"max chroma shift {report.max_chroma_shift:.3f}")
    return img.with_planes(L=new_l, C=new_c), report
