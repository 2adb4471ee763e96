"""
hdrgamut - Configuration Package
================================

Defaults, user configuration and target gamut presets.
"""

from hdrgamut.config.settings import get_settings, get_user_configuration
from hdrgamut.config.gamuts import SRGB, PRESETS, load_chromaticities, resolve_target
