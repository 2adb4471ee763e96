"""
hdrgamut - CLI Package
======================

Pipeline orchestration, codecs, diagnostics and the hdr-gamut command.
"""

from hdrgamut.cli.codecs import (
    load_hdr,
    read_pfm,
    write_pfm,
    write_rgbe,
    save_png_srgb,
    load_png_srgb,
    save_mask_png,
    save_false_colour_png,
)
from hdrgamut.cli.pipeline import PipelineConfig, PipelineResult, run_pipeline
