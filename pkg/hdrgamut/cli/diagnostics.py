"""
hdrgamut - Diagnostics
======================

Writes the optional diagnostics directory of a pipeline run: out-of-gamut
masks, the scale vector, the boundary table, the hue-difference map and the
text reports.
"""

import logging
import os
from typing import TYPE_CHECKING, List

from ..config.settings import LIGHTNESS_SETTINGS
from ..imaging.buffer import HUE_BINS
from ..tone.lightness import dump_tone_curves, tone_curve_samples
from .codecs import save_false_colour_png, save_mask_png

if TYPE_CHECKING:
    from .pipeline import PipelineResult

logger = logging.getLogger("hdrgamut-diagnostics")

# hue slices sampled for the tone-curve dump
TONE_CURVE_HUES = tuple(range(0, HUE_BINS, 30))


def stages_text(result: "PipelineResult") -> str:
    return "".join(f"{name} {fraction:.6f}\n" for name, fraction in result.oog.items())


def write_diagnostics(result: "PipelineResult", directory: str) -> List[str]:
    """Write every diagnostic the result supports; returns the file paths"""
    os.makedirs(directory, exist_ok=True)
    written = []

    def path(name: str) -> str:
        full = os.path.join(directory, name)
        written.append(full)
        return full

    save_mask_png(path("oog_before.png"), result.oog_masks["tmo"])
    save_mask_png(path("oog_after.png"), result.oog_masks["clip"])
    result.boundary.dump(path("boundary.txt"))

    with open(path("stages.txt"), "w") as f:
        f.write(stages_text(result))

    if result.scale_vector is not None:
        result.scale_vector.dump(path("scale_vector.txt"))

    if result.clip_report is not None:
        with open(path("clip_report.txt"), "w") as f:
            f.write(result.clip_report.to_text())

    if result.hue_report is not None:
        save_false_colour_png(path("delta_h.png"), result.hue_report.map)
        with open(path("hue_report.txt"), "w") as f:
            f.write(result.hue_report.to_text())

    if result.tone is not None:
        curves = tone_curve_samples(result.tone.table, TONE_CURVE_HUES, n=LIGHTNESS_SETTINGS["curve_samples"])
        dump_tone_curves(curves, path("tone_curves.txt"))

    logger.info(f"Wrote {len(written)} diagnostics files to {directory}")
    return written
