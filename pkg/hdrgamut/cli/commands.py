"""
hdrgamut - CLI Command Implementations
======================================

Implementation logic behind the hdr-gamut subcommands. The typer layer in
main.py only parses options and renders results.
"""

import logging
from typing import Dict, List, Optional, Sequence

from ..config.gamuts import resolve_target
from ..config.settings import BOUNDARY_SETTINGS, LIGHTNESS_SETTINGS
from ..errors import ConfigurationError, GamutError
from ..gamut.boundary import GamutBoundary, build_target_boundary
from ..metrics.hue import HueDiffReport, hue_diff_image
from ..tone.lightness import ToneCurve, cusp_aligned_tmo, dump_tone_curves, tone_curve_samples
from ..tone.photographic import anchor_hdr
from .codecs import load_hdr, load_image_xyz
from .pipeline import PipelineConfig, PipelineResult, to_lch_image, run_pipeline

logger = logging.getLogger("hdrgamut-cli-commands")


class PipelineCommands:
    """Operations exposed by the command line."""

    def __init__(self, target: str = "srgb", samples_per_edge: Optional[int] = None):
        self.target = target
        self.samples_per_edge = BOUNDARY_SETTINGS["samples_per_edge"] if samples_per_edge is None else samples_per_edge
        self._boundary: Optional[GamutBoundary] = None

    @property
    def boundary(self) -> GamutBoundary:
        """Target boundary, built on first use"""
        if self._boundary is None:
            try:
                self._boundary = build_target_boundary(resolve_target(self.target), self.samples_per_edge)
            except (GamutError, ValueError) as e:
                raise ConfigurationError(f"target {self.target}: {e}") from e
        return self._boundary

    def map_image(self, cfg: PipelineConfig) -> PipelineResult:
        """Run the pipeline for one image"""
        logger.info(f"Mapping {cfg.input} -> {cfg.output} (tmo={cfg.tmo}, chroma={cfg.chroma}, clip={cfg.clip})")
        return run_pipeline(cfg)

    def export_boundary(self, out: str) -> Dict[str, float]:
        """Write the cusp table and return a short summary"""
        boundary = self.boundary
        boundary.dump(out)
        return {
            "slices": len(boundary.cusp_c),
            "max_cusp_chroma": float(boundary.cusp_c.max()),
            "min_cusp_chroma": float(boundary.cusp_c.min()),
            "mean_cusp_lightness": float(boundary.cusp_l.mean()),
        }

    def compare(self, reference: str, test: str) -> HueDiffReport:
        """Hue differences between two display-referred images"""
        prims = resolve_target(self.target)
        return hue_diff_image(load_image_xyz(reference), load_image_xyz(test), white=prims.white)

    def tone_curves(self, cfg: PipelineConfig, hues: Sequence[int], chroma: float = 0.0,
                    samples: Optional[int] = None, out: Optional[str] = None) -> List[ToneCurve]:
        """Fit cusp-aligned curves on an HDR image and sample them at the given hues"""
        samples = LIGHTNESS_SETTINGS["curve_samples"] if samples is None else samples
        prims = cfg.target_primaries()
        lch = to_lch_image(anchor_hdr(load_hdr(cfg.input), cfg.anchor), 1.0, prims)
        tone = cusp_aligned_tmo(
            lch, self.boundary, cfg.percentile_policy(), compression=cfg.compression,
            ceiling=cfg.ceiling, global_sg=cfg.global_sg, decomposition=cfg.decomposition,
            filter_method=cfg.filter_method,
        )
        curves = tone_curve_samples(tone.table, hues, chroma=chroma, n=samples, key=cfg.key)
        if out:
            dump_tone_curves(curves, out)
        return curves
