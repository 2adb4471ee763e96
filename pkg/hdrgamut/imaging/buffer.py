"""
hdrgamut - Image Buffers
========================

Planar floating-point image container. Planes are named (``X, Y, Z`` or
``L, C, h``), row-major, float64 and all of one size.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

logger = logging.getLogger("hdrgamut-imaging")

XYZ_PLANES = ("X", "Y", "Z")
LCH_PLANES = ("L", "C", "h")
HUE_BINS = 360


@dataclass
class ImagePlanar:
    """Multi-channel image stored as named planes."""

    width: int
    height: int
    channels: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for name, plane in list(self.channels.items()):
            plane = np.asarray(plane, dtype=np.float64)
            if plane.shape != (self.height, self.width):
                raise ValueError(
                    f"plane '{name}' has shape {plane.shape}, expected {(self.height, self.width)}"
                )
            if not np.all(np.isfinite(plane)):
                raise ValueError(f"plane '{name}' contains NaN or Inf")
            self.channels[name] = plane

    @classmethod
    def from_array(cls, array: np.ndarray, names: Sequence[str]) -> "ImagePlanar":
        """Build from an (H, W, N) array, or (H, W) for a single name"""
        array = np.asarray(array, dtype=np.float64)
        if array.ndim == 2:
            array = array[..., np.newaxis]
        if array.ndim != 3 or array.shape[2] != len(names):
            raise ValueError(f"array of shape {array.shape} does not match planes {tuple(names)}")
        height, width = array.shape[:2]
        return cls(width, height, {name: array[..., i].copy() for i, name in enumerate(names)})

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.channels)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def plane(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise KeyError(f"image has no plane '{name}' (planes: {', '.join(self.names)})")

    def stack(self, names: Iterable[str] = None) -> np.ndarray:
        """(H, W, N) view of the requested planes"""
        names = tuple(names) if names is not None else self.names
        return np.stack([self.plane(n) for n in names], axis=-1)

    def with_planes(self, **planes: np.ndarray) -> "ImagePlanar":
        """New image sharing untouched planes and replacing the given ones"""
        channels = dict(self.channels)
        channels.update(planes)
        return ImagePlanar(self.width, self.height, channels)

    def copy(self) -> "ImagePlanar":
        return ImagePlanar(self.width, self.height, {n: p.copy() for n, p in self.channels.items()})

    def equals(self, other: "ImagePlanar") -> bool:
        """Bit-identical comparison"""
        return (
            self.shape == other.shape
            and self.names == other.names
            and all(np.array_equal(self.plane(n), other.plane(n)) for n in self.names)
        )


def hue_bins(hue: np.ndarray) -> np.ndarray:
    """1-degree hue bin of each pixel, floor(h) mod 360"""
    return np.mod(np.floor(hue).astype(np.int64), HUE_BINS)
