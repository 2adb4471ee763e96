"""
hdrgamut - Compression Functions
================================

Registry of the functions F used by the top branch of the cusp-aligned
lightness curve. Each satisfies F(0) = 0 and is strictly increasing on
x >= 0.
"""

from typing import Callable, Dict

import numpy as np

CompressionFunction = Callable[[np.ndarray], np.ndarray]


def _reinhard(x: np.ndarray) -> np.ndarray:
    return x / (1.0 + x)


COMPRESSION_FUNCTIONS: Dict[str, CompressionFunction] = {
    "log": np.log1p,
    "sqrt": np.sqrt,
    "reinhard": _reinhard,
}


def compression_function(name: str) -> CompressionFunction:
    try:
        return COMPRESSION_FUNCTIONS[name]
    except KeyError:
        raise ValueError(
            f"Unknown compression function: {name} (choose from {', '.join(COMPRESSION_FUNCTIONS)})"
        ) from None
