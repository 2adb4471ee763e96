"""
hdrgamut - Regions and Percentiles
==================================

8-connected component counting and nearest-rank percentiles, both plain and
grouped by hue bin.
"""

import math
import logging
from typing import Tuple

import numpy as np
from scipy import ndimage

logger = logging.getLogger("hdrgamut-imaging")

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def connected_regions(mask: np.ndarray) -> Tuple[int, int]:
    """
    Count 8-connected regions of a boolean mask.

    Returns:
        (number of regions, number of true pixels)
    """
    mask = np.asarray(mask, dtype=bool)
    pixels = int(mask.sum())
    if pixels == 0:
        return 0, 0
    _, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    return int(count), pixels


def nearest_rank(p: float, n: int) -> int:
    """Zero-based index of the ceil(p*n)-th smallest of n values"""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"percentile must be in (0, 1], got {p}")
    # round away float noise such as 0.99 * 100 = 99.00000000000001
    rank = math.ceil(round(p * n, 9))
    return min(max(rank, 1), n) - 1


def percentile(values, p: float) -> float:
    """Nearest-rank percentile"""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("percentile of an empty set")
    return float(np.sort(values)[nearest_rank(p, values.size)])


def grouped_percentile(values: np.ndarray, groups: np.ndarray, p: float, n_groups: int,
                       lower: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nearest-rank percentile of values within each group.

    Args:
        values: 1-D values
        groups: 1-D integer group ids in [0, n_groups)
        p: percentile fraction
        n_groups: number of groups
        lower: rank from the bottom instead (percentile of the lower tail)

    Returns:
        (per-group percentile, per-group count); empty groups hold 0.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    groups = np.asarray(groups, dtype=np.int64).ravel()
    counts = np.bincount(groups, minlength=n_groups)
    result = np.zeros(n_groups)
    if values.size == 0:
        return result, counts

    keyed = -values if lower else values
    order = np.lexsort((keyed, groups))
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    for g in np.nonzero(counts)[0]:
        index = starts[g] + nearest_rank(p, int(counts[g]))
        result[g] = values[order[index]]
    return result, counts
