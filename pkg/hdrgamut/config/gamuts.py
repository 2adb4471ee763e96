"""
hdrgamut - Target Gamut Presets
===============================

Named target gamuts and the chromaticities file reader.
"""

import os
import logging
from typing import Dict

from ..color.colorspace import D65_WHITE, Chromaticities
from ..errors import ConfigurationError, GamutError

logger = logging.getLogger("hdrgamut-config")

SRGB = Chromaticities(
    red=(0.64, 0.33),
    green=(0.30, 0.60),
    blue=(0.15, 0.06),
    white=D65_WHITE,
)

PRESETS: Dict[str, Chromaticities] = {
    "srgb": SRGB,
}


def load_chromaticities(path: str) -> Chromaticities:
    """
    Read a chromaticities file.

    The file holds four ``x y`` pairs, one per line, in the order red,
    green, blue, white. Blank lines and ``#`` comments are ignored.
    """
    if not os.path.exists(path):
        raise ConfigurationError(f"Chromaticities file not found: {path}")

    pairs = []
    with open(path, "r") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.replace(",", " ").split()
            if len(fields) != 2:
                raise ConfigurationError(f"{path}:{lineno}: expected 'x y', got '{raw.strip()}'")
            try:
                pairs.append((float(fields[0]), float(fields[1])))
            except ValueError:
                raise ConfigurationError(f"{path}:{lineno}: not a number: '{raw.strip()}'")

    if len(pairs) != 4:
        raise ConfigurationError(f"{path}: expected 4 chromaticity pairs (r, g, b, w), found {len(pairs)}")

    try:
        return Chromaticities(red=pairs[0], green=pairs[1], blue=pairs[2], white=pairs[3])
    except GamutError as e:
        raise ConfigurationError(f"{path}: {e}")


def resolve_target(target: str) -> Chromaticities:
    """Resolve a preset name or a chromaticities file path"""
    preset = PRESETS.get(target.lower())
    if preset is not None:
        return preset
    logger.debug(f"Target '{target}' is not a preset, reading it as a chromaticities file")
    return load_chromaticities(target)
