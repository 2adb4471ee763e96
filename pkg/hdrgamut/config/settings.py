"""
hdrgamut - Configuration Settings
=================================

Global defaults for the gamut management pipeline. Defines defaults for:
- Pipeline stage selection
- Bilateral base/detail decomposition
- Chroma compression (percentiles, scale increment, smoothing)
- Lightness compression
- Gamut clipping
- Boundary sampling and metrics
"""

import os
import json
import logging
from typing import Dict, Any

import yaml

logger = logging.getLogger("hdrgamut-config")

# Base directories
HDRGAMUT_HOME = os.path.expanduser("~/.hdrgamut")
HDRGAMUT_USER_CONFIG = os.path.join(HDRGAMUT_HOME, "config.yaml")

# Pipeline settings
PIPELINE_SETTINGS = {
    "tmo": "photographic",
    "key": 0.18,
    "chroma": "hue-specific",
    "clip": "interp",
    "target": "srgb",
    "anchor": "logavg50",
    "display_white_y": 100.0,
}

# Bilateral filter settings
BILATERAL_SETTINGS = {
    "sigma_s_fraction": 0.2,  # of max(width, height)
    "sigma_r_fraction": 0.05,  # of max(plane)
    "truncate": 2.0,  # kernel radius in units of sigma_s
    "epsilon": 1e-6,  # division guard for the detail layer
    "method": "auto",
    "decomposition": "divide",
    "grid_sigma_px": 8.0,  # grid decimates so that sigma_s spans about this many cells
    "grid_level_step": 0.5,  # range level spacing in units of sigma_r
}

# Chroma compression settings
CHROMA_SETTINGS = {
    "spread_percentile": 0.99,
    "concentrated_percentile": 1.00,
    "region_ratio_threshold": 0.01,
    "increment": 0.1,
    "max_scale": 50.0,
    "smoothing": "lbox",
    "smoothing_window": 15,
    "scale_method": "closed-form",
}

# Lightness compression settings
LIGHTNESS_SETTINGS = {
    "compression": "log",
    "ceiling": "cusp",
    "global_sg": False,
    "anchor_lightness": 50.0,
    "curve_samples": 256,
}

# Clipping settings
CLIP_SETTINGS = {
    "mode": "interpolated",
    "weight": 0.5,
    "epsilon": 1e-9,
}

# Boundary settings
BOUNDARY_SETTINGS = {
    "samples_per_edge": 512,
    "edge_tolerance": 0.3,  # chroma slack when fitting slice edges to surface samples
    "hue_bins": 360,
}

# Metrics settings
METRICS_SETTINGS = {
    "min_ipt_chroma": 1e-4,
    "colormap": "magma",
    "delta_h_display_max": 30.0,  # degrees mapped to the top of the colormap
}

_SECTIONS = {
    "pipeline": PIPELINE_SETTINGS,
    "bilateral": BILATERAL_SETTINGS,
    "chroma": CHROMA_SETTINGS,
    "lightness": LIGHTNESS_SETTINGS,
    "clip": CLIP_SETTINGS,
    "boundary": BOUNDARY_SETTINGS,
    "metrics": METRICS_SETTINGS,
}


def get_settings(section: str) -> Dict[str, Any]:
    """Get a copy of the settings for a specific section"""
    return dict(_SECTIONS.get(section.lower(), {}))


def get_user_configuration(path: str = HDRGAMUT_USER_CONFIG) -> Dict[str, Any]:
    """Load user-specific configuration if available"""
    candidates = [path]
    root, ext = os.path.splitext(path)
    if ext in (".yaml", ".yml"):
        candidates.append(root + ".json")

    for candidate in candidates:
        if not os.path.exists(candidate):
            continue
        try:
            with open(candidate, "r") as f:
                if candidate.endswith(".json"):
                    data = json.load(f)
                else:
                    data = yaml.safe_load(f)
        except Exception as e:
            logger.warning(f"Failed to load user configuration: {e}")
            return {}
        if not isinstance(data, dict):
            logger.warning(f"Ignoring user configuration {candidate}: not a mapping")
            return {}
        return data
    return {}
