"""
hdrgamut - Circular Smoothing of Scale Vectors
==============================================

Hue is periodic, so every smoother here treats bins 359 and 0 as
neighbours. ``lbox`` (centred moving average) is the default; ``sgolay``,
``loess`` and ``rloess`` are alternatives that give similar results at a
higher cost.
"""

import logging

import numpy as np
from scipy import ndimage, signal

from ..config.settings import CHROMA_SETTINGS

logger = logging.getLogger("hdrgamut-chroma")

SMOOTHING_METHODS = ("lbox", "sgolay", "loess", "rloess")
_ROBUST_ITERATIONS = 2


def _circular_windows(values: np.ndarray, window: int):
    half = window // 2
    offsets = np.arange(-half, half + 1)
    index = (np.arange(values.size)[:, None] + offsets[None, :]) % values.size
    return offsets.astype(np.float64), values[index], index


def _local_linear(values: np.ndarray, window: int, robustness: np.ndarray) -> np.ndarray:
    """Weighted local linear fit evaluated at the window centre"""
    x, y, index = _circular_windows(values, window)
    half = window // 2
    tricube = (1.0 - (np.abs(x) / (half + 1)) ** 3) ** 3
    w = tricube[None, :] * robustness[index]

    s = w.sum(axis=1)
    sx = (w * x).sum(axis=1)
    sxx = (w * x * x).sum(axis=1)
    sy = (w * y).sum(axis=1)
    sxy = (w * x * y).sum(axis=1)
    det = s * sxx - sx * sx

    fitted = values.copy()
    ok = det > 1e-12
    fitted[ok] = (sxx[ok] * sy[ok] - sx[ok] * sxy[ok]) / det[ok]
    mean_only = ~ok & (s > 0)
    fitted[mean_only] = sy[mean_only] / s[mean_only]
    return fitted


def _loess(values: np.ndarray, window: int, robust: bool) -> np.ndarray:
    robustness = np.ones_like(values)
    fitted = _local_linear(values, window, robustness)
    if not robust:
        return fitted
    for _ in range(_ROBUST_ITERATIONS):
        residuals = values - fitted
        scale = np.median(np.abs(residuals))
        if scale <= 0:
            break
        u = residuals / (6.0 * scale)
        robustness = np.where(np.abs(u) < 1.0, (1.0 - u * u) ** 2, 0.0)
        fitted = _local_linear(values, window, robustness)
    return fitted


def smooth_scale_vector(raw: np.ndarray, method: str = None, window: int = None) -> np.ndarray:
    """
    Circularly smooth a per-hue vector.

    Args:
        raw: per-bin values
        method: lbox, sgolay, loess or rloess
        window: odd window width in bins

    Returns:
        Smoothed vector, bounded by min(raw) and max(raw).
    """
    method = CHROMA_SETTINGS["smoothing"] if method is None else method
    window = CHROMA_SETTINGS["smoothing_window"] if window is None else window
    raw = np.asarray(raw, dtype=np.float64)
    if window < 1 or window % 2 != 1 or window >= raw.size:
        raise ValueError(f"smoothing window must be odd and below {raw.size}, got {window}")

    if method == "lbox":
        smoothed = ndimage.uniform_filter1d(raw, size=window, mode="wrap")
    elif method == "sgolay":
        smoothed = signal.savgol_filter(raw, window, polyorder=min(2, window - 1), mode="wrap")
    elif method in ("loess", "rloess"):
        smoothed = _loess(raw, window, robust=(method == "rloess"))
    else:
        raise ValueError(f"Unknown smoothing method: {method}")

    return np.clip(smoothed, raw.min(), raw.max())
