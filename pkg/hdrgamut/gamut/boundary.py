"""
hdrgamut - Target Gamut Boundary
================================

Per-hue cusp descriptors of an RGB gamut in LCh. Each 1-degree hue slice is
modelled as a triangle in the chroma-lightness plane whose apex is the cusp,
the maximum-chroma point found by sampling the surface of the RGB cube. The
other two vertices sit on the achromatic axis: at (0, 0) and (0, 100) for a
bare cusp table, or at lightnesses fitted to the sampled surface so that the
triangle holds the whole cube.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from ..color.colorspace import Chromaticities, LChColor, rgb_to_lch
from ..config.settings import BOUNDARY_SETTINGS, CLIP_SETTINGS
from ..errors import GamutError
from ..imaging.buffer import HUE_BINS, hue_bins

logger = logging.getLogger("hdrgamut-gamut")

ArrayLike = Union[float, np.ndarray]

MIN_SAMPLES_PER_EDGE = 64
_ACHROMATIC = 1e-9

# L* where the cube-root branch meets zero luminance; scaling an RGB colour
# toward black moves it along a line through (C=0, L=-16)
BLACK_RAY_FLOOR = -16.0


@dataclass(frozen=True)
class GamutSlice:
    """Triangle model of one hue slice."""

    hue: int
    cuspC: float
    cuspL: float
    g_b: float = 0.0
    g_t: float = 0.0
    floorL: float = 0.0
    ceilingL: float = 100.0


@dataclass
class GamutBoundary:
    """
    Cusp table of a gamut, one entry per degree of hue.

    floor_l and ceiling_l are the lightnesses where the lower and upper edges
    of each slice meet the achromatic axis (0 and 100 unless fitted).
    """

    cusp_c: np.ndarray
    cusp_l: np.ndarray
    white_y: float = 1.0
    prims: Optional[Chromaticities] = field(default=None, compare=False)
    floor_l: Optional[np.ndarray] = None
    ceiling_l: Optional[np.ndarray] = None

    def __post_init__(self):
        self.cusp_c = np.asarray(self.cusp_c, dtype=np.float64)
        self.cusp_l = np.asarray(self.cusp_l, dtype=np.float64)
        self.floor_l = np.zeros(HUE_BINS) if self.floor_l is None else np.asarray(self.floor_l, dtype=np.float64)
        self.ceiling_l = (np.full(HUE_BINS, 100.0) if self.ceiling_l is None
                          else np.asarray(self.ceiling_l, dtype=np.float64))
        for name in ("cusp_c", "cusp_l", "floor_l", "ceiling_l"):
            if getattr(self, name).shape != (HUE_BINS,):
                raise GamutError(f"a boundary needs exactly {HUE_BINS} hue slices")
        if np.any(self.floor_l > 0.0) or np.any(self.ceiling_l < 100.0):
            raise GamutError("slice edges must meet the axis outside [0, 100]")
        for name in ("cusp_c", "cusp_l", "floor_l", "ceiling_l"):
            getattr(self, name).setflags(write=False)

    @property
    def slices(self) -> List[GamutSlice]:
        return [self.slice(h) for h in range(HUE_BINS)]

    def slice(self, hue: float) -> GamutSlice:
        h = int(hue_bins(np.asarray(hue)))
        return GamutSlice(hue=h, cuspC=float(self.cusp_c[h]), cuspL=float(self.cusp_l[h]),
                          g_b=0.0, g_t=float(self.cusp_l[h]),
                          floorL=float(self.floor_l[h]), ceilingL=float(self.ceiling_l[h]))

    def edges(self, hue: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(cuspC, cuspL, floorL, ceilingL) of the slices holding each hue"""
        bins = hue_bins(np.asarray(hue, dtype=np.float64))
        return self.cusp_c[bins], self.cusp_l[bins], self.floor_l[bins], self.ceiling_l[bins]

    def max_chroma(self, hue: ArrayLike, lightness: ArrayLike) -> np.ndarray:
        """Triangle chroma limit at the given lightness; no range checks"""
        cusp_c, cusp_l, floor_l, ceiling_l = self.edges(hue)
        return triangle_chroma(cusp_c, cusp_l, np.asarray(lightness, dtype=np.float64), floor_l, ceiling_l)

    def contains_mask(self, lightness: ArrayLike, chroma: ArrayLike, hue: ArrayLike,
                      epsilon: Optional[float] = None) -> np.ndarray:
        epsilon = CLIP_SETTINGS["epsilon"] if epsilon is None else epsilon
        lightness = np.asarray(lightness, dtype=np.float64)
        chroma = np.asarray(chroma, dtype=np.float64)
        in_range = (lightness >= 0.0) & (lightness <= 100.0)
        limit = self.max_chroma(hue, np.clip(lightness, 0.0, 100.0))
        return in_range & (chroma <= limit + epsilon)

    def contains_scaled_mask(self, lightness: ArrayLike, chroma: ArrayLike, hue: ArrayLike,
                             scale: ArrayLike, epsilon: Optional[float] = None) -> np.ndarray:
        """Containment in the slice triangle with both axes scaled by R"""
        epsilon = CLIP_SETTINGS["epsilon"] if epsilon is None else epsilon
        scale = np.asarray(scale, dtype=np.float64)
        lightness = np.asarray(lightness, dtype=np.float64)
        chroma = np.asarray(chroma, dtype=np.float64)
        unscaled = lightness / scale
        in_range = (unscaled >= 0.0) & (unscaled <= 100.0)
        limit = scale * self.max_chroma(hue, np.clip(unscaled, 0.0, 100.0))
        return in_range & (chroma <= limit + epsilon)

    def min_enclosing_scale(self, lightness: ArrayLike, chroma: ArrayLike, hue: ArrayLike) -> np.ndarray:
        """
        Smallest real R for which the R-scaled slice triangle holds the point.

        A slice whose lower edge meets the axis at L=0 cannot reach points
        under that edge (C/L > cuspC/cuspL) by scaling, so they get +inf, as
        do points with negative lightness. A sunk floor reaches everything.
        """
        lightness = np.asarray(lightness, dtype=np.float64)
        chroma = np.asarray(chroma, dtype=np.float64)
        cusp_c, cusp_l, floor_l, ceiling_l = self.edges(hue)

        upper = (chroma * (ceiling_l - cusp_l) / cusp_c + lightness) / ceiling_l
        needed = np.maximum(np.maximum(upper, lightness / 100.0), 0.0)

        sunk = floor_l < 0.0
        depth = np.where(sunk, -floor_l, 1.0)
        lower = (chroma * (cusp_l - floor_l) / cusp_c - lightness) / depth
        needed = np.where(sunk, np.maximum(needed, lower), needed)

        reachable = (lightness >= 0.0) & (sunk | (chroma * cusp_l <= cusp_c * lightness * (1.0 + 1e-12)))
        return np.where(reachable, needed, np.inf)

    def dump(self, path: str) -> None:
        """Write 'hue cuspC cuspL floorL ceilingL' records"""
        with open(path, "w") as f:
            f.write("# hue cuspC cuspL floorL ceilingL\n")
            for h in range(HUE_BINS):
                f.write(f"{h} {self.cusp_c[h]:.6f} {self.cusp_l[h]:.6f} "
                        f"{self.floor_l[h]:.6f} {self.ceiling_l[h]:.6f}\n")

    @classmethod
    def load(cls, path: str, white_y: float = 1.0) -> "GamutBoundary":
        """Read a dumped table; bare 'hue cuspC cuspL' records keep the (0, 100) edges"""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape not in ((HUE_BINS, 3), (HUE_BINS, 5)):
            raise GamutError(f"{path}: expected {HUE_BINS} records of 'hue cuspC cuspL [floorL ceilingL]'")
        data = data[np.argsort(data[:, 0])]
        if data.shape[1] == 3:
            return cls(cusp_c=data[:, 1], cusp_l=data[:, 2], white_y=white_y)
        return cls(cusp_c=data[:, 1], cusp_l=data[:, 2], white_y=white_y, floor_l=data[:, 3], ceiling_l=data[:, 4])


def triangle_chroma(cusp_c: np.ndarray, cusp_l: np.ndarray, lightness: np.ndarray,
                    floor_l: ArrayLike = 0.0, ceiling_l: ArrayLike = 100.0) -> np.ndarray:
    """Chroma of the triangle edge at lightness (lower edge below the cusp, upper above)"""
    lower = cusp_c * (lightness - floor_l) / (cusp_l - floor_l)
    upper = cusp_c * (ceiling_l - lightness) / (ceiling_l - cusp_l)
    return np.where(lightness <= cusp_l, lower, upper)


def _cube_surface(samples: int) -> np.ndarray:
    axis = np.linspace(0.0, 1.0, samples)
    u, v = np.meshgrid(axis, axis, indexing="ij")
    u, v = u.ravel(), v.ravel()
    faces = []
    for channel in range(3):
        for value in (0.0, 1.0):
            face = np.empty((u.size, 3))
            others = [c for c in range(3) if c != channel]
            face[:, channel] = value
            face[:, others[0]] = u
            face[:, others[1]] = v
            faces.append(face)
    return np.concatenate(faces)


def _cusps_from_samples(lch: np.ndarray, cusp_c: np.ndarray, cusp_l: np.ndarray) -> None:
    """Fold LCh samples into running per-bin maximum-chroma tables (in place)"""
    chromatic = lch[:, 1] > _ACHROMATIC
    lch = lch[chromatic]
    if lch.size == 0:
        return
    bins = hue_bins(lch[:, 2])
    order = np.lexsort((lch[:, 1], bins))
    sorted_bins = bins[order]
    last = np.concatenate([np.nonzero(np.diff(sorted_bins))[0], [sorted_bins.size - 1]])
    winners = order[last]
    for b, i in zip(bins[winners], winners):
        if lch[i, 1] > cusp_c[b]:
            cusp_c[b] = lch[i, 1]
            cusp_l[b] = lch[i, 0]


def _fit_edges(lch: np.ndarray, cusp_c: np.ndarray, cusp_l: np.ndarray,
               tolerance: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Axis intercepts of the slice edges through each cusp such that every
    sample lies within tolerance chroma units of its triangle.

    A sample (C, L) puts a bound on the edge through the cusp at
    (cuspC*L - C'*cuspL) / (cuspC - C') with C' = C - tolerance: an upper
    bound on the floor below the cusp, a lower bound on the ceiling above it.
    """
    lch = lch[lch[:, 1] > _ACHROMATIC]
    bins = hue_bins(lch[:, 2])
    cc, cl = cusp_c[bins], cusp_l[bins]
    reduced = lch[:, 1] - tolerance
    binding = (reduced > 0.0) & (reduced < cc)
    bins, cc, cl, reduced, lightness = bins[binding], cc[binding], cl[binding], reduced[binding], lch[binding, 0]
    intercept = (cc * lightness - reduced * cl) / (cc - reduced)
    below = lightness < cl
    floor_l = _per_bin(np.minimum, intercept[below], bins[below], BLACK_RAY_FLOOR)
    ceiling_l = _per_bin(np.maximum, intercept[~below], bins[~below], 100.0)
    return floor_l, ceiling_l


def _per_bin(reduce: np.ufunc, values: np.ndarray, bins: np.ndarray, initial: float) -> np.ndarray:
    """Reduce values by hue bin, starting every bin from initial"""
    out = np.full(HUE_BINS, initial)
    if bins.size == 0:
        return out
    order = np.argsort(bins, kind="stable")
    sorted_bins = bins[order]
    starts = np.flatnonzero(np.diff(sorted_bins, prepend=-1))
    out[sorted_bins[starts]] = reduce(reduce.reduceat(values[order], starts), initial)
    return out


def _fill_empty(cusp_c: np.ndarray, cusp_l: np.ndarray) -> None:
    empty = cusp_c <= 0.0
    if not empty.any():
        return
    filled = np.nonzero(~empty)[0]
    if filled.size == 0:
        raise GamutError("degenerate primaries")
    missing = np.nonzero(empty)[0]
    logger.debug(f"Interpolating {missing.size} empty hue bins")
    cusp_c[missing] = np.interp(missing, filled, cusp_c[filled], period=HUE_BINS)
    cusp_l[missing] = np.interp(missing, filled, cusp_l[filled], period=HUE_BINS)


def build_target_boundary(prims: Chromaticities, samples_per_edge: Optional[int] = None) -> GamutBoundary:
    """
    Cusp table of an RGB gamut from samples of its cube surface.

    The slice edges are fitted to the same samples. Every RGB colour lies on
    the segment between black and a surface colour of the same hue, and that
    segment runs toward (0, BLACK_RAY_FLOOR), so a floor at or below it keeps
    the interior of the cube inside the triangles as well.

    Args:
        prims: primaries and white point of the target
        samples_per_edge: grid resolution of each of the six cube faces (>= 64)
    """
    samples = BOUNDARY_SETTINGS["samples_per_edge"] if samples_per_edge is None else samples_per_edge
    if samples < MIN_SAMPLES_PER_EDGE:
        raise ValueError(f"samples_per_edge must be at least {MIN_SAMPLES_PER_EDGE}, got {samples}")

    lch = rgb_to_lch(_cube_surface(samples), prims)
    cusp_c = np.zeros(HUE_BINS)
    cusp_l = np.zeros(HUE_BINS)
    _cusps_from_samples(lch, cusp_c, cusp_l)
    _fill_empty(cusp_c, cusp_l)
    floor_l, ceiling_l = _fit_edges(lch, cusp_c, cusp_l, BOUNDARY_SETTINGS["edge_tolerance"])
    logger.info(f"Built target boundary from {6 * samples * samples} surface samples "
                f"(floor {floor_l.min():.1f}, ceiling {ceiling_l.max():.1f})")
    return GamutBoundary(cusp_c=cusp_c, cusp_l=cusp_l, white_y=1.0, prims=prims,
                         floor_l=floor_l, ceiling_l=ceiling_l)


def brute_force_cusps(prims: Chromaticities, samples: int) -> GamutBoundary:
    """Cusps from a full samples^3 cube sampling (slow; a reference). Edges keep (0, 100)."""
    axis = np.linspace(0.0, 1.0, samples)
    g, b = np.meshgrid(axis, axis, indexing="ij")
    g, b = g.ravel(), b.ravel()
    cusp_c = np.zeros(HUE_BINS)
    cusp_l = np.zeros(HUE_BINS)
    for r in axis:
        rgb = np.stack([np.full_like(g, r), g, b], axis=-1)
        _cusps_from_samples(rgb_to_lch(rgb, prims), cusp_c, cusp_l)
    _fill_empty(cusp_c, cusp_l)
    return GamutBoundary(cusp_c=cusp_c, cusp_l=cusp_l, white_y=1.0, prims=prims)


def max_chroma_at(boundary: GamutBoundary, hue: ArrayLike, lightness: ArrayLike) -> ArrayLike:
    """Chroma of the slice boundary at a display lightness in [0, 100]"""
    lightness_arr = np.asarray(lightness, dtype=np.float64)
    if np.any(lightness_arr < 0.0) or np.any(lightness_arr > 100.0):
        raise GamutError("lightness out of display range")
    result = boundary.max_chroma(hue, lightness_arr)
    return float(result) if np.ndim(result) == 0 else result


def contains(boundary: GamutBoundary, p: LChColor, epsilon: Optional[float] = None) -> bool:
    return bool(boundary.contains_mask(p.L, p.C, p.h, epsilon))


def contains_scaled(boundary: GamutBoundary, p: LChColor, scale: float,
                    epsilon: Optional[float] = None) -> bool:
    if scale < 1.0:
        raise ValueError(f"scale must be >= 1, got {scale}")
    return bool(boundary.contains_scaled_mask(p.L, p.C, p.h, scale, epsilon))
