"""
hdrgamut - Image Codecs
=======================

Radiance RGBE and PFM readers/writers for scene-referred input, and 8-bit
sRGB PNG output through Pillow. HDR files are assumed to hold linear sRGB
primaries and are matrixed to XYZ on load.
"""

import io
import logging
import os
import re
from typing import BinaryIO, Optional, Tuple

import numpy as np
from matplotlib import colormaps
from PIL import Image

from ..color.colorspace import (
    Chromaticities,
    apply_matrix,
    rgb_to_xyz_matrix,
    srgb_decode,
    srgb_encode,
    xyz_to_rgb_matrix,
)
from ..config.gamuts import SRGB
from ..config.settings import METRICS_SETTINGS, PIPELINE_SETTINGS
from ..errors import ImageFormatError
from ..imaging.buffer import XYZ_PLANES, ImagePlanar

logger = logging.getLogger("hdrgamut-codecs")

RGBE_MAGICS = (b"#?RADIANCE", b"#?RGBE")
_RGBE_FORMAT = b"FORMAT=32-bit_rle_rgbe"
_RESOLUTION = re.compile(rb"^-Y (\d+) \+X (\d+)$")
_RLE_MIN_WIDTH, _RLE_MAX_WIDTH = 8, 0x7FFF


def _read_line(f: BinaryIO) -> bytes:
    line = f.readline()
    if not line:
        raise ImageFormatError("corrupt image: unexpected end of header")
    return line.rstrip(b"\r\n")


def _read_exact(f: BinaryIO, count: int) -> bytes:
    data = f.read(count)
    if len(data) != count:
        raise ImageFormatError("corrupt image: truncated pixel data")
    return data


# RGBE

def rgbe_to_rgb(rgbe: np.ndarray) -> np.ndarray:
    """uint8 (..., 4) -> linear float (..., 3); exponent 0 is black"""
    rgbe = np.asarray(rgbe)
    mantissa = rgbe[..., :3].astype(np.float64)
    exponent = rgbe[..., 3:].astype(np.int32)
    rgb = mantissa * np.ldexp(1.0, exponent - (128 + 8))
    return np.where(exponent == 0, 0.0, rgb)


def rgb_to_rgbe(rgb: np.ndarray) -> np.ndarray:
    """Linear float (..., 3) -> uint8 (..., 4) with a shared exponent"""
    rgb = np.maximum(np.asarray(rgb, dtype=np.float64), 0.0)
    brightest = rgb.max(axis=-1)
    mantissa, exponent = np.frexp(brightest)
    visible = brightest >= 1e-32
    scale = np.where(visible, mantissa * 256.0 / np.where(visible, brightest, 1.0), 0.0)

    rgbe = np.zeros(rgb.shape[:-1] + (4,), dtype=np.uint8)
    rgbe[..., :3] = np.clip(np.floor(rgb * scale[..., np.newaxis]), 0, 255)
    rgbe[..., 3] = np.where(visible, np.clip(exponent + 128, 0, 255), 0)
    return rgbe


def _parse_rgbe_header(f: BinaryIO) -> Tuple[int, int]:
    magic = _read_line(f)
    if not magic.startswith(RGBE_MAGICS):
        raise ImageFormatError("unsupported format")
    while True:
        line = _read_line(f)
        if not line:
            break
        if line.startswith(b"FORMAT=") and line != _RGBE_FORMAT:
            raise ImageFormatError(f"unsupported format: {line.decode(errors='replace')}")
    match = _RESOLUTION.match(_read_line(f))
    if not match:
        raise ImageFormatError("unsupported format: only -Y h +X w orientation is read")
    height, width = int(match.group(1)), int(match.group(2))
    if width <= 0 or height <= 0:
        raise ImageFormatError("corrupt image: empty resolution")
    return width, height


def _read_rle_channels(f: BinaryIO, width: int) -> np.ndarray:
    scanline = np.zeros((width, 4), dtype=np.uint8)
    for channel in range(4):
        i = 0
        while i < width:
            count = _read_exact(f, 1)[0]
            if count > 128:
                count -= 128
                if i + count > width:
                    raise ImageFormatError("corrupt image: run exceeds scanline")
                scanline[i:i + count, channel] = _read_exact(f, 1)[0]
            else:
                if count == 0 or i + count > width:
                    raise ImageFormatError("corrupt image: bad literal run")
                scanline[i:i + count, channel] = np.frombuffer(_read_exact(f, count), dtype=np.uint8)
            i += count
    return scanline


def _read_scanline(f: BinaryIO, width: int) -> np.ndarray:
    head = _read_exact(f, 4)
    if head[0] == 2 and head[1] == 2 and not head[2] & 0x80:
        if (head[2] << 8) + head[3] != width:
            raise ImageFormatError("corrupt image: scanline width mismatch")
        return _read_rle_channels(f, width)
    rest = _read_exact(f, 4 * (width - 1))
    return np.frombuffer(head + rest, dtype=np.uint8).reshape(width, 4)


def read_rgbe(f: BinaryIO) -> np.ndarray:
    """Decode a Radiance picture to a linear (H, W, 3) array"""
    width, height = _parse_rgbe_header(f)
    rgbe = np.empty((height, width, 4), dtype=np.uint8)
    for y in range(height):
        rgbe[y] = _read_scanline(f, width)
    return rgbe_to_rgb(rgbe)


def _encode_rle_channel(values: np.ndarray) -> bytes:
    out = bytearray()
    i, n = 0, values.size
    while i < n:
        run = 1
        while i + run < n and run < 127 and values[i + run] == values[i]:
            run += 1
        if run >= 4:
            out += bytes((128 + run, int(values[i])))
            i += run
            continue
        start = i
        while i < n and i - start < 128:
            if i + 3 < n and values[i] == values[i + 1] == values[i + 2] == values[i + 3]:
                break
            i += 1
        out.append(i - start)
        out += values[start:i].tobytes()
    return bytes(out)


def write_rgbe(path: str, rgb: np.ndarray, rle: bool = True) -> None:
    """Write a linear (H, W, 3) array as a Radiance picture"""
    rgbe = rgb_to_rgbe(rgb)
    height, width = rgbe.shape[:2]
    use_rle = rle and _RLE_MIN_WIDTH <= width <= _RLE_MAX_WIDTH
    with open(path, "wb") as f:
        f.write(b"#?RADIANCE\n" + _RGBE_FORMAT + b"\n\n")
        f.write(f"-Y {height} +X {width}\n".encode())
        for y in range(height):
            if not use_rle:
                f.write(rgbe[y].tobytes())
                continue
            f.write(bytes((2, 2, width >> 8, width & 0xFF)))
            for channel in range(4):
                f.write(_encode_rle_channel(np.ascontiguousarray(rgbe[y, :, channel])))


# PFM

def read_pfm(f: BinaryIO) -> np.ndarray:
    """Decode a PFM file to (H, W, 3); grey files are replicated to RGB"""
    kind = _read_line(f).strip()
    if kind == b"PF":
        channels = 3
    elif kind == b"Pf":
        channels = 1
    else:
        raise ImageFormatError("unsupported format")
    try:
        width, height = (int(v) for v in _read_line(f).split())
        scale = float(_read_line(f).strip())
    except ValueError:
        raise ImageFormatError("corrupt image: bad PFM header") from None
    if width <= 0 or height <= 0 or scale == 0.0:
        raise ImageFormatError("corrupt image: bad PFM header")

    dtype = np.dtype("<f4") if scale < 0 else np.dtype(">f4")
    count = width * height * channels
    data = np.frombuffer(_read_exact(f, count * 4), dtype=dtype).reshape(height, width, channels)
    data = np.flipud(data).astype(np.float64)
    if not np.all(np.isfinite(data)):
        raise ImageFormatError("corrupt image: non-finite pixel values")
    if channels == 1:
        data = np.repeat(data, 3, axis=2)
    return data


def write_pfm(path: str, rgb: np.ndarray, little_endian: bool = True) -> None:
    rgb = np.asarray(rgb)
    height, width = rgb.shape[:2]
    grey = rgb.ndim == 2
    dtype = "<f4" if little_endian else ">f4"
    with open(path, "wb") as f:
        f.write(b"Pf\n" if grey else b"PF\n")
        f.write(f"{width} {height}\n{-1.0 if little_endian else 1.0}\n".encode())
        f.write(np.flipud(rgb).astype(dtype).tobytes())


# loading into XYZ

def rgb_to_xyz_image(rgb: np.ndarray, prims: Chromaticities = SRGB, white_y: float = 1.0) -> ImagePlanar:
    return ImagePlanar.from_array(apply_matrix(rgb_to_xyz_matrix(prims), rgb) * white_y, XYZ_PLANES)


def xyz_image_to_rgb(img: ImagePlanar, prims: Chromaticities = SRGB, white_y: float = 1.0) -> np.ndarray:
    return apply_matrix(xyz_to_rgb_matrix(prims), img.stack(XYZ_PLANES) / white_y)


def read_hdr_rgb(path: str) -> np.ndarray:
    """Linear RGB of an RGBE or PFM file, chosen by magic"""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input file not found: {path}")
    with open(path, "rb") as f:
        data = f.read()
    if not data:
        raise ImageFormatError("corrupt image: empty file")
    stream = io.BytesIO(data)
    if data.startswith(RGBE_MAGICS):
        return read_rgbe(stream)
    if data.startswith((b"PF\n", b"Pf\n", b"PF\r\n", b"Pf\r\n")):
        return read_pfm(stream)
    raise ImageFormatError("unsupported format")


def load_hdr(path: str, prims: Chromaticities = SRGB) -> ImagePlanar:
    """Read an HDR file to relative XYZ (unit RGB white has Y = 1)"""
    rgb = read_hdr_rgb(path)
    logger.info(f"Loaded {path}: {rgb.shape[1]}x{rgb.shape[0]}")
    return rgb_to_xyz_image(rgb, prims)


# PNG output

def quantize(encoded: np.ndarray) -> np.ndarray:
    """[0, 1] -> 8-bit, rounding halves up"""
    return np.floor(np.clip(encoded, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def encode_srgb8(img: ImagePlanar, prims: Chromaticities = SRGB, white_y: Optional[float] = None) -> np.ndarray:
    """Display-referred XYZ -> (H, W, 3) uint8 sRGB"""
    white_y = PIPELINE_SETTINGS["display_white_y"] if white_y is None else white_y
    rgb = xyz_image_to_rgb(img, prims, white_y)
    outside = int(np.count_nonzero((rgb < -1e-6) | (rgb > 1.0 + 1e-6)))
    if outside:
        logger.debug(f"Clamping {outside} RGB components outside [0, 1]")
    return quantize(srgb_encode(np.clip(rgb, 0.0, 1.0)))


def save_png_srgb(path: str, img: ImagePlanar, prims: Chromaticities = SRGB,
                  white_y: Optional[float] = None) -> np.ndarray:
    pixels = encode_srgb8(img, prims, white_y)
    Image.fromarray(pixels).save(path)
    logger.info(f"Wrote {path}")
    return pixels


def load_png_srgb(path: str, prims: Chromaticities = SRGB, white_y: Optional[float] = None) -> ImagePlanar:
    """8-bit sRGB PNG -> display-referred XYZ"""
    white_y = PIPELINE_SETTINGS["display_white_y"] if white_y is None else white_y
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input file not found: {path}")
    try:
        with Image.open(path) as image:
            pixels = np.asarray(image.convert("RGB"), dtype=np.float64) / 255.0
    except OSError as e:
        raise ImageFormatError(f"corrupt image: {e}") from e
    return rgb_to_xyz_image(srgb_decode(pixels), prims, white_y)


def load_image_xyz(path: str, prims: Chromaticities = SRGB, display_white_y: Optional[float] = None) -> ImagePlanar:
    """PNG files are read as display-referred; RGBE/PFM are scaled so unit RGB white is display white"""
    display_white_y = PIPELINE_SETTINGS["display_white_y"] if display_white_y is None else display_white_y
    if path.lower().endswith(".png"):
        return load_png_srgb(path, prims, display_white_y)
    return rgb_to_xyz_image(read_hdr_rgb(path), prims, display_white_y)


def save_mask_png(path: str, mask: np.ndarray) -> None:
    Image.fromarray(np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)).save(path)


def save_false_colour_png(path: str, values: np.ndarray, vmax: Optional[float] = None,
                          cmap: Optional[str] = None) -> None:
    """Map values in [0, vmax] through a matplotlib colormap"""
    vmax = METRICS_SETTINGS["delta_h_display_max"] if vmax is None else vmax
    cmap = METRICS_SETTINGS["colormap"] if cmap is None else cmap
    normalized = np.clip(np.asarray(values, dtype=np.float64) / vmax, 0.0, 1.0)
    rgba = colormaps[cmap](normalized)
    Image.fromarray(quantize(rgba[..., :3])).save(path)
