"""
hdrgamut - Cusp-Aligned Lightness Compression
=============================================

Per hue slice, the lightness range of the image is split at L_mid. Above it
a compressive function F maps the overshoot into the slice, with a ceiling
that moves from the slice top (achromatic pixels) towards 100 as chroma
grows. Below it a linear ramp lifts the undershoot. The curve runs on the
base layer of the lightness plane; detail is re-injected afterwards.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..chroma.policy import PercentilePolicy, select_percentile
from ..config.settings import BILATERAL_SETTINGS, LIGHTNESS_SETTINGS, PIPELINE_SETTINGS
from ..gamut.boundary import GamutBoundary, GamutSlice
from ..gamut.source import SourceGamut, build_source_gamut
from ..imaging.bilateral import BaseDetail, decompose
from ..imaging.buffer import HUE_BINS, ImagePlanar, hue_bins
from .curves import COMPRESSION_FUNCTIONS, compression_function
from .photographic import anchor_luminance, photographic_curve

logger = logging.getLogger("hdrgamut-tone")

TMO_VARIANTS = ("photographic", "cusp-aligned")
CEILINGS = ("cusp", "white")


class TmoChoice(BaseModel):
    """Which tone mapping runs and how."""

    model_config = ConfigDict(frozen=True)

    variant: str = PIPELINE_SETTINGS["tmo"]
    key: float = Field(PIPELINE_SETTINGS["key"], gt=0.0)
    compression: str = LIGHTNESS_SETTINGS["compression"]
    ceiling: str = LIGHTNESS_SETTINGS["ceiling"]
    global_sg: bool = LIGHTNESS_SETTINGS["global_sg"]

    @field_validator("variant")
    @classmethod
    def _known_variant(cls, value: str) -> str:
        value = "cusp-aligned" if value == "cusp" else value
        if value not in TMO_VARIANTS:
            raise ValueError(f"tmo must be one of {', '.join(TMO_VARIANTS)}")
        return value

    @field_validator("compression")
    @classmethod
    def _known_compression(cls, value: str) -> str:
        if value not in COMPRESSION_FUNCTIONS:
            raise ValueError(f"compression must be one of {', '.join(COMPRESSION_FUNCTIONS)}")
        return value

    @field_validator("ceiling")
    @classmethod
    def _known_ceiling(cls, value: str) -> str:
        if value not in CEILINGS:
            raise ValueError(f"ceiling must be one of {', '.join(CEILINGS)}")
        return value


@dataclass(frozen=True)
class LightnessCurveParams:
    """Compression curve of one hue slice."""

    hue: int
    g_t: float
    g_b: float
    SG_t: float
    SG_b: float
    L_mid: float
    a_t: float
    N: float
    b_b: float
    cusp_c: float
    compression: str = "log"

    def b_t(self, chroma) -> np.ndarray:
        """Top-branch slope; the ceiling moves from g_t to 100 as w = C / (C + cuspC) grows"""
        w = np.asarray(chroma, dtype=np.float64) / (np.asarray(chroma, dtype=np.float64) + self.cusp_c)
        return ((1.0 - w) * (self.g_t - self.L_mid) + w * (100.0 - self.L_mid)) / self.N


def _ceiling(dst: GamutBoundary, ceiling: str) -> np.ndarray:
    if ceiling == "cusp":
        return np.array(dst.cusp_l, dtype=np.float64)
    if ceiling == "white":
        return np.full(HUE_BINS, 100.0)
    raise ValueError(f"Unknown ceiling: {ceiling}")


def _split(g_t, g_b, sg_t, sg_b):
    """L_mid per slice; g_t when the slice needs no compression"""
    total = sg_t + sg_b
    safe = np.where(total > 0.0, total, 1.0)
    return np.where(total > 0.0, g_b + (g_t - g_b) * sg_b / safe, g_t)


def _bottom_slope(l_mid, g_b, sg_b):
    span = l_mid - g_b + sg_b
    safe = np.where(span > 0.0, span, 1.0)
    return np.where(span > 0.0, (l_mid - g_b) / safe, 1.0)


@dataclass(frozen=True)
class LightnessTable:
    """Fitted curve parameters for all 360 hue slices."""

    g_t: np.ndarray
    g_b: np.ndarray
    sg_t: np.ndarray
    sg_b: np.ndarray
    l_mid: np.ndarray
    n: np.ndarray
    b_b: np.ndarray
    cusp_c: np.ndarray
    compression: str = "log"

    def __post_init__(self):
        for name in ("g_t", "g_b", "sg_t", "sg_b", "l_mid", "n", "b_b", "cusp_c"):
            values = np.array(getattr(self, name), dtype=np.float64)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def is_identity(self) -> bool:
        return bool(np.all(self.sg_t == 0.0) and np.all(self.sg_b == 0.0))

    def params(self, hue: int) -> LightnessCurveParams:
        h = int(hue) % HUE_BINS
        return LightnessCurveParams(
            hue=h, g_t=float(self.g_t[h]), g_b=float(self.g_b[h]), SG_t=float(self.sg_t[h]),
            SG_b=float(self.sg_b[h]), L_mid=float(self.l_mid[h]), a_t=float(self.l_mid[h]),
            N=float(self.n[h]), b_b=float(self.b_b[h]), cusp_c=float(self.cusp_c[h]),
            compression=self.compression,
        )

    def compress(self, lightness: np.ndarray, chroma: np.ndarray, hue: np.ndarray) -> np.ndarray:
        """Evaluate each pixel's slice curve"""
        bins = hue_bins(np.asarray(hue, dtype=np.float64))
        return _evaluate(
            np.asarray(lightness, dtype=np.float64), np.asarray(chroma, dtype=np.float64),
            self.g_t[bins], self.g_b[bins], self.sg_b[bins], self.l_mid[bins], self.n[bins],
            self.b_b[bins], self.cusp_c[bins], self.compression,
        )


def _evaluate(lightness, chroma, g_t, g_b, sg_b, l_mid, n, b_b, cusp_c, compression: str) -> np.ndarray:
    f = compression_function(compression)
    w = chroma / (chroma + cusp_c)
    safe_n = np.where(n > 0.0, n, 1.0)
    b_t = ((1.0 - w) * (g_t - l_mid) + w * (100.0 - l_mid)) / safe_n
    top = np.where(n > 0.0, l_mid + b_t * f(np.maximum(lightness - l_mid, 0.0)), lightness)
    bottom = g_b + b_b * (lightness - (g_b - sg_b))
    return np.where(lightness > l_mid, top, bottom)


def fit_lightness_table(src: SourceGamut, dst: GamutBoundary, compression: Optional[str] = None,
                        ceiling: Optional[str] = None, global_sg: Optional[bool] = None) -> LightnessTable:
    """
    Fit the curve of every slice from the source lightness extremes.

    Args:
        src: source gamut built on the base-layer lightness
        dst: destination boundary
        compression: name of F
        ceiling: ``cusp`` (g_t = cusp lightness) or ``white`` (g_t = 100)
        global_sg: use the largest overshoots of all slices everywhere
    """
    compression = LIGHTNESS_SETTINGS["compression"] if compression is None else compression
    ceiling = LIGHTNESS_SETTINGS["ceiling"] if ceiling is None else ceiling
    global_sg = LIGHTNESS_SETTINGS["global_sg"] if global_sg is None else global_sg
    f = compression_function(compression)

    g_t = _ceiling(dst, ceiling)
    g_b = np.zeros(HUE_BINS)
    filled = ~src.empty
    sg_t = np.where(filled, np.maximum(src.lightness_max - g_t, 0.0), 0.0)
    sg_b = np.where(filled, np.maximum(g_b - src.lightness_min, 0.0), 0.0)
    if global_sg:
        sg_t = np.full(HUE_BINS, sg_t.max())
        sg_b = np.full(HUE_BINS, sg_b.max())

    l_mid = _split(g_t, g_b, sg_t, sg_b)
    n = f(g_t + sg_t - l_mid)
    b_b = _bottom_slope(l_mid, g_b, sg_b)
    logger.debug(f"Lightness table: {int((sg_t > 0).sum())} slices overshoot, "
                 f"{int((sg_b > 0).sum())} undershoot")
    return LightnessTable(g_t=g_t, g_b=g_b, sg_t=sg_t, sg_b=sg_b, l_mid=l_mid, n=n, b_b=b_b,
                          cusp_c=np.array(dst.cusp_c), compression=compression)


def fit_lightness_params(src: SourceGamut, dst: GamutBoundary, h: int, compression: Optional[str] = None,
                         ceiling: Optional[str] = None) -> LightnessCurveParams:
    """Curve parameters of a single slice"""
    return fit_lightness_table(src, dst, compression, ceiling, global_sg=False).params(h)


def compress_lightness(lightness, chroma, params: LightnessCurveParams,
                       dst_slice: Optional[GamutSlice] = None) -> np.ndarray:
    """
    Compress lightness with one slice's curve.

    Above L_mid: L_mid + b_t F(L - L_mid). At or below: the linear map of
    [g_b - SG_b, L_mid] onto [g_b, L_mid]. N = 0 leaves the top branch as
    the identity. Results may exceed the slice for bright saturated pixels.
    """
    cusp_c = params.cusp_c if dst_slice is None else dst_slice.cuspC
    result = _evaluate(
        np.asarray(lightness, dtype=np.float64), np.asarray(chroma, dtype=np.float64),
        params.g_t, params.g_b, params.SG_b, params.L_mid, np.float64(params.N), params.b_b, cusp_c,
        params.compression,
    )
    return float(result) if np.ndim(result) == 0 else result


@dataclass
class CuspToneResult:
    """Output of cusp-aligned tone mapping."""

    image: ImagePlanar
    table: LightnessTable
    percentile: float
    decomposition: BaseDetail


def cusp_aligned_tmo(img: ImagePlanar, dst: GamutBoundary, policy: Optional[PercentilePolicy] = None,
                     compression: Optional[str] = None, ceiling: Optional[str] = None,
                     global_sg: Optional[bool] = None, decomposition: Optional[str] = None,
                     filter_method: Optional[str] = None) -> CuspToneResult:
    """
    Compress the HDR lightness plane of an LCh image into the destination.

    The lightness plane is split into base and detail, the per-slice curves
    are fitted on the base layer at the policy's percentile, the base is
    compressed and the detail re-injected. Chroma and hue are untouched.
    """
    policy = PercentilePolicy() if policy is None else policy
    decomposition = BILATERAL_SETTINGS["decomposition"] if decomposition is None else decomposition
    filter_method = BILATERAL_SETTINGS["method"] if filter_method is None else filter_method

    lightness = img.plane("L")
    if decomposition == "none":
        base_detail = decompose(lightness, "none")
    else:
        base_detail = decompose(lightness, decomposition, filter_method=filter_method)

    percentile = select_percentile(img, dst, policy)
    src = build_source_gamut(img, percentile, lightness=base_detail.base)
    table = fit_lightness_table(src, dst, compression, ceiling, global_sg)

    if table.is_identity:
        logger.info("Cusp-aligned TMO: image lightness already inside the destination")
        return CuspToneResult(image=img, table=table, percentile=percentile, decomposition=base_detail)

    base = table.compress(base_detail.base, img.plane("C"), img.plane("h"))
    result = img.with_planes(L=base_detail.recombine(base))
    logger.info(f"Cusp-aligned TMO at percentile {percentile}: max overshoot {table.sg_t.max():.2f}, "
                f"max undershoot {table.sg_b.max():.2f}")
    return CuspToneResult(image=result, table=table, percentile=percentile, decomposition=base_detail)


@dataclass
class ToneCurve:
    """Sampled curve of one slice at a fixed chroma."""

    hue: int
    chroma: float
    inputs: np.ndarray
    outputs: np.ndarray
    photographic: np.ndarray


def _photographic_lightness(inputs: np.ndarray, key: float) -> np.ndarray:
    """Photographic curve mapped through L*; the anchor luminance plays the log-average"""
    relative = np.where(inputs > 8.0, ((inputs + 16.0) / 116.0) ** 3, inputs / 903.3)
    displayed = photographic_curve(relative, key, anchor_luminance())
    displayed = displayed / max(float(displayed.max()), 1e-12)
    return np.where(displayed > 216.0 / 24389.0, 116.0 * np.cbrt(displayed) - 16.0, 903.3 * displayed)


def tone_curve_samples(table: LightnessTable, hues: Sequence[int], chroma: float = 0.0,
                       n: Optional[int] = None, key: Optional[float] = None) -> List[ToneCurve]:
    """
    Sample the fitted curves of the given slices over the full input range
    of the table, alongside the photographic curve on the same range.
    """
    n = LIGHTNESS_SETTINGS["curve_samples"] if n is None else n
    key = PIPELINE_SETTINGS["key"] if key is None else key
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")

    low = float(min(0.0, (table.g_b - table.sg_b).min()))
    high = float((table.g_t + table.sg_t).max())
    inputs = np.linspace(low, max(high, 100.0), n)
    photographic = _photographic_lightness(np.maximum(inputs, 0.0), key)

    curves = []
    for hue in hues:
        params = table.params(hue)
        outputs = compress_lightness(inputs, np.full_like(inputs, chroma), params)
        curves.append(ToneCurve(hue=params.hue, chroma=chroma, inputs=inputs, outputs=outputs,
                                photographic=photographic))
    return curves


def dump_tone_curves(curves: Sequence[ToneCurve], path: str) -> None:
    with open(path, "w") as f:
        f.write("# hue chroma L_in L_out L_photographic\n")
        for curve in curves:
            for l_in, l_out, l_ph in zip(curve.inputs, curve.outputs, curve.photographic):
                f.write(f"{curve.hue} {curve.chroma:.4f} {l_in:.6f} {l_out:.6f} {l_ph:.6f}\n")
