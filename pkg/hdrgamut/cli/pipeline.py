"""
hdrgamut - Pipeline
===================

Runs the full workflow: load, tone map, convert to LCh, compress chroma,
clip to the target gamut, convert back and encode. Every stage failure is
re-raised as a PipelineStageError naming the stage.
"""

import json
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..chroma.compression import ChromaResult, compress_chroma
from ..chroma.policy import PercentilePolicy, out_of_gamut_mask
from ..chroma.scale import ScaleVector
from ..chroma.smoothing import SMOOTHING_METHODS
from ..clip.clipping import ClipPolicy, ClipReport, clip_image
from ..color.colorspace import Chromaticities, lch_to_xyz, xyz_to_lch
from ..config.gamuts import resolve_target
from ..config.settings import (
    BILATERAL_SETTINGS,
    BOUNDARY_SETTINGS,
    CHROMA_SETTINGS,
    CLIP_SETTINGS,
    LIGHTNESS_SETTINGS,
    PIPELINE_SETTINGS,
    get_user_configuration,
)
from ..errors import ConfigurationError, PipelineStageError
from ..gamut.boundary import GamutBoundary, build_target_boundary
from ..imaging.bilateral import DECOMPOSITIONS, FILTER_METHODS
from ..imaging.buffer import LCH_PLANES, XYZ_PLANES, ImagePlanar
from ..metrics.hue import HueDiffReport, hue_diff_image, oog_fraction
from ..tone.curves import COMPRESSION_FUNCTIONS
from ..tone.lightness import CEILINGS, CuspToneResult, TmoChoice, cusp_aligned_tmo
from ..tone.photographic import ANCHOR_MODES, anchor_hdr, photographic_tmo
from .codecs import load_hdr, save_png_srgb
from .diagnostics import write_diagnostics

logger = logging.getLogger("hdrgamut-pipeline")

TMO_NAMES = ("photographic", "cusp")
CHROMA_METHODS = ("hue-specific", "global", "none")
CLIP_NAMES = ("interp", "chroma", "lightness", "none")


def _one_of(name: str, value: str, allowed) -> str:
    if value not in allowed:
        raise ValueError(f"{name} must be one of {', '.join(allowed)}, got '{value}'")
    return value


class PipelineConfig(BaseModel):
    """All options of a pipeline run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    input: Optional[str] = None
    output: Optional[str] = None
    tmo: str = "photographic"
    key: float = Field(PIPELINE_SETTINGS["key"], gt=0.0)
    chroma: str = PIPELINE_SETTINGS["chroma"]
    clip: str = PIPELINE_SETTINGS["clip"]
    clip_weight: float = Field(CLIP_SETTINGS["weight"], ge=0.0, le=1.0)
    spread_percentile: float = Field(CHROMA_SETTINGS["spread_percentile"], gt=0.0, le=1.0)
    concentrated_percentile: float = Field(CHROMA_SETTINGS["concentrated_percentile"], gt=0.0, le=1.0)
    region_ratio_threshold: float = Field(CHROMA_SETTINGS["region_ratio_threshold"], gt=0.0)
    target: str = PIPELINE_SETTINGS["target"]
    anchor: str = PIPELINE_SETTINGS["anchor"]
    diag: Optional[str] = None
    display_white_y: float = Field(PIPELINE_SETTINGS["display_white_y"], gt=0.0)
    compression: str = LIGHTNESS_SETTINGS["compression"]
    ceiling: str = LIGHTNESS_SETTINGS["ceiling"]
    global_sg: bool = LIGHTNESS_SETTINGS["global_sg"]
    decomposition: str = BILATERAL_SETTINGS["decomposition"]
    filter_method: str = BILATERAL_SETTINGS["method"]
    increment: float = Field(CHROMA_SETTINGS["increment"], gt=0.0)
    max_scale: float = Field(CHROMA_SETTINGS["max_scale"], ge=1.0)
    scale_method: str = CHROMA_SETTINGS["scale_method"]
    smoothing: str = CHROMA_SETTINGS["smoothing"]
    smoothing_window: int = Field(CHROMA_SETTINGS["smoothing_window"], ge=1, lt=360)
    boundary_samples: int = Field(BOUNDARY_SETTINGS["samples_per_edge"], ge=64)

    @field_validator("tmo")
    @classmethod
    def _tmo(cls, value: str) -> str:
        value = "cusp" if value == "cusp-aligned" else value
        return _one_of("tmo", value, TMO_NAMES)

    @field_validator("chroma")
    @classmethod
    def _chroma(cls, value: str) -> str:
        return _one_of("chroma", value, CHROMA_METHODS)

    @field_validator("clip")
    @classmethod
    def _clip(cls, value: str) -> str:
        return _one_of("clip", value, CLIP_NAMES)

    @field_validator("anchor")
    @classmethod
    def _anchor(cls, value: str) -> str:
        return _one_of("anchor", value, ANCHOR_MODES)

    @field_validator("compression")
    @classmethod
    def _compression(cls, value: str) -> str:
        return _one_of("compression", value, tuple(COMPRESSION_FUNCTIONS))

    @field_validator("ceiling")
    @classmethod
    def _ceiling(cls, value: str) -> str:
        return _one_of("ceiling", value, CEILINGS)

    @field_validator("decomposition")
    @classmethod
    def _decomposition(cls, value: str) -> str:
        return _one_of("decomposition", value, DECOMPOSITIONS)

    @field_validator("filter_method")
    @classmethod
    def _filter_method(cls, value: str) -> str:
        return _one_of("filter_method", value, FILTER_METHODS)

    @field_validator("smoothing")
    @classmethod
    def _smoothing(cls, value: str) -> str:
        return _one_of("smoothing", value, SMOOTHING_METHODS)

    @field_validator("smoothing_window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 != 1:
            raise ValueError(f"smoothing_window must be odd, got {value}")
        return value

    @field_validator("scale_method")
    @classmethod
    def _scale_method(cls, value: str) -> str:
        return _one_of("scale_method", value, ("closed-form", "iterative"))

    @classmethod
    def build(cls, **values: Any) -> "PipelineConfig":
        """Validate, turning pydantic failures into ConfigurationError"""
        try:
            return cls(**values)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigurationError(f"invalid configuration: {problems}") from None

    @staticmethod
    def read_file(path: str) -> Dict[str, Any]:
        if not os.path.exists(path):
            raise ConfigurationError(f"Config file not found: {path}")
        try:
            with open(path, "r") as f:
                data = json.load(f) if path.endswith(".json") else yaml.safe_load(f)
        except (OSError, ValueError, yaml.YAMLError) as e:
            raise ConfigurationError(f"Cannot read config file {path}: {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {path} must hold a mapping")
        return {str(k).replace("-", "_"): v for k, v in data.items()}

    @classmethod
    def from_file(cls, path: str, **overrides: Any) -> "PipelineConfig":
        values = cls.read_file(path)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.build(**values)

    @classmethod
    def resolve(cls, config_file: Optional[str] = None, use_user_config: bool = True,
                **flags: Any) -> "PipelineConfig":
        """Defaults < user configuration < config file < explicit flags"""
        values: Dict[str, Any] = {}
        if use_user_config:
            user = get_user_configuration().get("pipeline", {})
            if isinstance(user, dict):
                values.update({str(k).replace("-", "_"): v for k, v in user.items()})
        if config_file:
            values.update(cls.read_file(config_file))
        values.update({k: v for k, v in flags.items() if v is not None})
        return cls.build(**values)

    def percentile_policy(self) -> PercentilePolicy:
        return PercentilePolicy(
            spread_percentile=self.spread_percentile,
            concentrated_percentile=self.concentrated_percentile,
            region_ratio_threshold=self.region_ratio_threshold,
        )

    def clip_policy(self) -> ClipPolicy:
        return ClipPolicy(mode=self.clip if self.clip != "none" else "interp", weight=self.clip_weight)

    def tmo_choice(self) -> TmoChoice:
        return TmoChoice(variant=self.tmo, key=self.key, compression=self.compression,
                         ceiling=self.ceiling, global_sg=self.global_sg)

    def target_primaries(self) -> Chromaticities:
        return resolve_target(self.target)


@dataclass
class PipelineResult:
    """Everything a pipeline run produced."""

    display_xyz: ImagePlanar
    lch: ImagePlanar
    baseline_xyz: ImagePlanar
    boundary: GamutBoundary
    oog: Dict[str, float] = field(default_factory=dict)
    oog_masks: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    chroma: Optional[ChromaResult] = None
    tone: Optional[CuspToneResult] = None
    clip_report: Optional[ClipReport] = None
    hue_report: Optional[HueDiffReport] = None
    pixels: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def scale_vector(self) -> Optional[ScaleVector]:
        return self.chroma.scale_vector if self.chroma is not None else None


@contextmanager
def stage(name: str):
    """Attach the stage name to any failure raised inside"""
    try:
        yield
    except PipelineStageError:
        raise
    except Exception as e:
        logger.debug(f"Stage {name} failed", exc_info=True)
        raise PipelineStageError(name, e) from e


def to_lch_image(xyz: ImagePlanar, white_y: float, prims: Chromaticities) -> ImagePlanar:
    lch = xyz_to_lch(xyz.stack(XYZ_PLANES), white_y, prims.white)
    return ImagePlanar.from_array(lch, LCH_PLANES)


def to_xyz_image(lch: ImagePlanar, white_y: float, prims: Chromaticities) -> ImagePlanar:
    xyz = lch_to_xyz(lch.stack(LCH_PLANES), white_y, prims.white)
    return ImagePlanar.from_array(xyz, XYZ_PLANES)


def _record_oog(result_oog: Dict[str, float], masks: Dict[str, np.ndarray], name: str,
                img: ImagePlanar, dst: GamutBoundary) -> None:
    masks[name] = out_of_gamut_mask(img, dst)
    result_oog[name] = oog_fraction(img, dst)
    logger.info(f"Out-of-gamut fraction after {name}: {result_oog[name]:.4%}")


def run_pipeline(cfg: PipelineConfig, image: Optional[ImagePlanar] = None,
                 boundary: Optional[GamutBoundary] = None) -> PipelineResult:
    """
    Run the configured pipeline.

    Args:
        cfg: validated configuration
        image: scene-referred XYZ to use instead of reading cfg.input
        boundary: precomputed target boundary (must match cfg.target)

    Returns:
        PipelineResult; the PNG is written when cfg.output is set and
        diagnostics when cfg.diag is set.
    """
    white_y = cfg.display_white_y
    policy = cfg.percentile_policy()
    oog: Dict[str, float] = {}
    masks: Dict[str, np.ndarray] = {}

    with stage("load"):
        if image is None:
            if not cfg.input:
                raise ConfigurationError("no input image given")
            image = load_hdr(cfg.input)
    with stage("boundary"):
        prims = cfg.target_primaries()
        dst = boundary if boundary is not None else build_target_boundary(prims, cfg.boundary_samples)

    tone: Optional[CuspToneResult] = None
    with stage("tmo"):
        if not np.any(image.plane("Y") > 0.0):
            logger.warning("No pixel has positive luminance; passing the image through as black")
            baseline_xyz = image.with_planes(**{name: np.zeros(image.shape) for name in XYZ_PLANES})
            lch_tmo = to_lch_image(baseline_xyz, white_y, prims)
        elif cfg.tmo == "photographic":
            baseline_xyz = photographic_tmo(image, cfg.key, white_y)
            lch_tmo = to_lch_image(baseline_xyz, white_y, prims)
        else:
            anchored = anchor_hdr(image, cfg.anchor)
            tone = cusp_aligned_tmo(
                to_lch_image(anchored, 1.0, prims), dst, policy, compression=cfg.compression,
                ceiling=cfg.ceiling, global_sg=cfg.global_sg, decomposition=cfg.decomposition,
                filter_method=cfg.filter_method,
            )
            lch_tmo = tone.image
            baseline_xyz = to_xyz_image(lch_tmo, white_y, prims)
    _record_oog(oog, masks, "tmo", lch_tmo, dst)

    with stage("chroma"):
        options = dict(decomposition=cfg.decomposition, filter_method=cfg.filter_method)
        if cfg.chroma == "hue-specific":
            options.update(d=cfg.increment, scale_method=cfg.scale_method, smoothing=cfg.smoothing,
                           window=cfg.smoothing_window, max_scale=cfg.max_scale)
        chroma = compress_chroma(lch_tmo, dst, cfg.chroma, policy, **options)
        lch_chroma = lch_tmo if chroma is None else chroma.image
    _record_oog(oog, masks, "chroma", lch_chroma, dst)

    clip_report: Optional[ClipReport] = None
    with stage("clip"):
        if cfg.clip == "none":
            lch_final = lch_chroma
        else:
            lch_final, clip_report = clip_image(lch_chroma, dst, cfg.clip_policy())
    _record_oog(oog, masks, "clip", lch_final, dst)

    with stage("output"):
        display_xyz = baseline_xyz if lch_final is lch_tmo else to_xyz_image(lch_final, white_y, prims)
        pixels = save_png_srgb(cfg.output, display_xyz, prims, white_y) if cfg.output else None

    with stage("metrics"):
        hue_report = hue_diff_image(baseline_xyz, display_xyz, white_y, prims.white)
        hue_report.oog_fraction_before = oog["tmo"]
        hue_report.oog_fraction_after = oog["clip"]

    result = PipelineResult(
        display_xyz=display_xyz, lch=lch_final, baseline_xyz=baseline_xyz, boundary=dst, oog=oog,
        oog_masks=masks, chroma=chroma, tone=tone, clip_report=clip_report, hue_report=hue_report,
        pixels=pixels,
    )

    if cfg.diag:
        with stage("diagnostics"):
            write_diagnostics(result, cfg.diag)
    return result
