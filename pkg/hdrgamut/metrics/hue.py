"""
hdrgamut - Hue Difference Metrics
=================================

Angular hue differences measured in cylindrical IPT, plus out-of-gamut
fractions. Pixels whose IPT chroma is too small for a meaningful hue are
left out of the statistics.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..color.colorspace import D65_WHITE, xyz_to_ipt_cyl
from ..config.settings import METRICS_SETTINGS, PIPELINE_SETTINGS
from ..errors import MetricsError
from ..gamut.boundary import GamutBoundary
from ..imaging.buffer import XYZ_PLANES, ImagePlanar

logger = logging.getLogger("hdrgamut-metrics")


def delta_h(h_t, h_c):
    """Shortest angular distance between two hues in degrees, in [0, 180]"""
    h_t = np.asarray(h_t, dtype=np.float64)
    h_c = np.asarray(h_c, dtype=np.float64)
    direct = np.abs(h_t - h_c)
    around = np.minimum(h_t, h_c) + 360.0 - np.maximum(h_t, h_c)
    result = np.minimum(direct, around)
    return float(result) if result.ndim == 0 else result


@dataclass
class HueDiffReport:
    """Hue differences between a reference and a test image."""

    mean_dh: float
    stderr_dh: float
    map: np.ndarray = field(repr=False)
    valid: np.ndarray = field(repr=False)
    oog_fraction_before: Optional[float] = None
    oog_fraction_after: Optional[float] = None

    @property
    def valid_pixels(self) -> int:
        return int(self.valid.sum())

    @property
    def no_chromatic_pixels(self) -> bool:
        return self.valid_pixels == 0

    def to_text(self) -> str:
        lines = [
            f"mean_delta_h {self.mean_dh:.6f}",
            f"stderr_delta_h {self.stderr_dh:.6f}",
            f"valid_pixels {self.valid_pixels}",
            f"total_pixels {self.valid.size}",
        ]
        if self.no_chromatic_pixels:
            lines.append("flag no_chromatic_pixels")
        if self.oog_fraction_before is not None:
            lines.append(f"oog_fraction_before {self.oog_fraction_before:.6f}")
        if self.oog_fraction_after is not None:
            lines.append(f"oog_fraction_after {self.oog_fraction_after:.6f}")
        return "\n".join(lines) + "\n"


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


def hue_diff_image(reference: ImagePlanar, test: ImagePlanar, white_y: Optional[float] = None,
                   white=D65_WHITE, min_chroma: Optional[float] = None) -> HueDiffReport:
    """
    Per-pixel IPT hue difference of two display-referred XYZ images.

    Raises:
        MetricsError: when the images differ in size
    """
    if reference.shape != test.shape:
        raise MetricsError(f"image dimensions differ: {reference.shape} vs {test.shape}")
    white_y = PIPELINE_SETTINGS["display_white_y"] if white_y is None else white_y
    min_chroma = METRICS_SETTINGS["min_ipt_chroma"] if min_chroma is None else min_chroma

    ref = xyz_to_ipt_cyl(reference.stack(XYZ_PLANES), white_y, white)
    tst = xyz_to_ipt_cyl(test.stack(XYZ_PLANES), white_y, white)
    valid = (ref[..., 1] >= min_chroma) & (tst[..., 1] >= min_chroma)
    dh = np.where(valid, delta_h(ref[..., 2], tst[..., 2]), 0.0)

    values = dh[valid]
    mean = float(values.mean()) if values.size else 0.0
    report = HueDiffReport(mean_dh=mean, stderr_dh=_stderr(values), map=dh, valid=valid)
    if report.no_chromatic_pixels:
        logger.warning("No chromatic pixels to compare; mean hue difference reported as 0")
    else:
        logger.info(f"Hue difference over {values.size} pixels: mean {mean:.3f} deg, stderr {report.stderr_dh:.3f}")
    return report


def oog_fraction(img: ImagePlanar, dst: GamutBoundary, epsilon: Optional[float] = None) -> float:
    """Fraction of LCh pixels outside the destination"""
    if img.pixel_count == 0:
        return 0.0
    inside = dst.contains_mask(img.plane("L"), img.plane("C"), img.plane("h"), epsilon)
    return float(np.count_nonzero(~inside) / img.pixel_count)


def aggregate_hue_reports(reports: Sequence[HueDiffReport]) -> Tuple[float, float]:
    """Corpus mean of per-image means and the standard error over those means"""
    means = np.array([r.mean_dh for r in reports if not r.no_chromatic_pixels], dtype=np.float64)
    if means.size == 0:
        return 0.0, 0.0
    return float(means.mean()), _stderr(means)
