"""Grayscale image container, PGM/PNG I/O and sub-pixel sampling."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

__all__ = [
    "GrayImage", "load_gray_image", "save_gray_image", "load_mask", "save_mask",
    "sample_bilinear", "mean_gray_disk",
]


@dataclass(frozen=True)
class GrayImage:
    """Immutable 2D 8-bit grayscale raster.

    Pixels are stored as a read-only (height, width) uint8 array. Pixel
    centers sit at integer coordinates, origin at the top-left, y pointing
    down. ``spacing_mm`` is the isotropic physical size of one pixel when
    known (ultrasound exports usually do not carry it).
    """

    pixels: np.ndarray
    spacing_mm: float | None = None

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("pixels must be a non-empty 2D array")
        if px.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {px.dtype}")
        if self.spacing_mm is not None and not self.spacing_mm > 0:
            raise ValueError("spacing_mm must be > 0")
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> np.ndarray:
        """Row-major flat view of the pixel values."""
        return self.pixels.reshape(-1)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width and 0.0 <= y < self.height


def _read_pgm(raw: bytes) -> np.ndarray:
    """Parse a binary (P5) PGM with maxval <= 255."""
    # header = magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed anywhere in between
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(raw):
            raise ValueError("truncated PGM header")
        ch = raw[pos:pos + 1]
        if ch in b" \t\r\n":
            pos += 1
        elif ch == b"#":
            nl = raw.find(b"\n", pos)
            pos = len(raw) if nl < 0 else nl + 1
        else:
            end = pos
            while end < len(raw) and raw[end:end + 1] not in b" \t\r\n#":
                end += 1
            tokens.append(raw[pos:end])
            pos = end
    if tokens[0] != b"P5":
        raise ValueError(f"unsupported PGM magic {tokens[0]!r} (only binary P5)")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval > 255:
        raise ValueError(f"PGM maxval {maxval} exceeds 8 bit; refusing to truncate")
    if maxval < 1:
        raise ValueError("invalid PGM maxval")
    pos += 1  # single whitespace byte after maxval
    data = raw[pos:pos + width * height]
    if len(data) != width * height:
        raise ValueError("truncated PGM pixel data")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width)


def _read_png(source, label: str = "<png>") -> np.ndarray:
    with Image.open(source) as im:
        if im.mode in ("I", "I;16", "I;16B", "I;16L"):
            raise ValueError(f"{label}: PNG bit depth > 8 is not supported; refusing to truncate")
        if im.mode == "L":
            arr = np.asarray(im)
        elif im.mode in ("RGB", "RGBA", "P", "LA"):
            arr = np.asarray(im.convert("L"))
        else:
            raise ValueError(f"{label}: unsupported PNG mode {im.mode}")
    return arr.astype(np.uint8)


def decode_image_bytes(raw: bytes, label: str = "<bytes>") -> GrayImage:
    """Decode in-memory PGM or PNG bytes into a GrayImage."""
    import io

    if raw[:2] == b"P5":
        return GrayImage(_read_pgm(raw))
    if raw[:8] == b"\x89PNG\r\n\x1a\n":
        return GrayImage(_read_png(io.BytesIO(raw), label))
    raise ValueError(f"{label}: unsupported image format (expected binary PGM or PNG)")


def load_gray_image(path, spacing_mm: float | None = None) -> GrayImage:
    """Load an 8-bit grayscale image from a PGM (binary P5) or PNG file.

    Color PNGs are converted to luma. If ``spacing_mm`` is not given, a
    sidecar manifest ``<path>.json`` with a ``spacing_mm`` entry is honored
    when present.
    """
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"P5":
        pixels = _read_pgm(raw)
    elif raw[:8] == b"\x89PNG\r\n\x1a\n":
        pixels = _read_png(path, str(path))
    else:
        raise ValueError(f"{path}: unsupported image format (expected binary PGM or PNG)")
    if spacing_mm is None:
        sidecar = path.with_name(path.name + ".json")
        if sidecar.exists():
            meta = json.loads(sidecar.read_text())
            spacing_mm = meta.get("spacing_mm")
    return GrayImage(pixels, spacing_mm=spacing_mm)


def save_gray_image(img: GrayImage | np.ndarray, path) -> None:
    """Write an 8-bit grayscale image as PGM (``.pgm``) or PNG (anything else)."""
    pixels = img.pixels if isinstance(img, GrayImage) else np.asarray(img, dtype=np.uint8)
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        h, w = pixels.shape
        with open(path, "wb") as f:
            f.write(f"P5\n{w} {h}\n255\n".encode())
            f.write(pixels.tobytes())
    else:
        Image.fromarray(pixels, mode="L").save(path, format="PNG")


def save_mask(mask: np.ndarray, path) -> None:
    """Write a boolean mask as a 0/255 grayscale image."""
    save_gray_image(np.where(np.asarray(mask, bool), 255, 0).astype(np.uint8), path)


def load_mask(path) -> np.ndarray:
    """Load a mask image; any nonzero pixel counts as set."""
    return load_gray_image(path).pixels > 0


def sample_bilinear(img: GrayImage | np.ndarray, x, y):
    """Bilinearly interpolated gray value at sub-pixel position(s) (x, y).

    Coordinates outside the raster are clamped to the border, making this a
    total function. At integer coordinates the pixel value is returned
    exactly; within a constant region the constant is returned exactly.
    Accepts scalars or equally-shaped arrays and broadcasts over them.
    """
    pixels = img.pixels if isinstance(img, GrayImage) else np.asarray(img)
    h, w = pixels.shape
    xs = np.clip(np.asarray(x, dtype=np.float64), 0.0, w - 1.0)
    ys = np.clip(np.asarray(y, dtype=np.float64), 0.0, h - 1.0)
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0
    p = pixels.astype(np.float64)
    top = p[y0, x0] + fx * (p[y0, x1] - p[y0, x0])
    bot = p[y1, x0] + fx * (p[y1, x1] - p[y1, x0])
    out = top + fy * (bot - top)
    return float(out) if out.ndim == 0 else out


def mean_gray_disk(img: GrayImage, center, radius: float) -> float:
    """Mean gray value over all pixel centers within ``radius`` of ``center``.

    The disk is intersected with the image; an empty intersection raises.
    """
    if not radius > 0:
        raise ValueError("radius must be > 0")
    cx, cy = float(center[0]), float(center[1])
    x_lo = max(0, math.ceil(cx - radius))
    x_hi = min(img.width - 1, math.floor(cx + radius))
    y_lo = max(0, math.ceil(cy - radius))
    y_hi = min(img.height - 1, math.floor(cy + radius))
    if x_lo > x_hi or y_lo > y_hi:
        raise ValueError("disk does not intersect the image")
    ys, xs = np.mgrid[y_lo:y_hi + 1, x_lo:x_hi + 1]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius * radius
    if not inside.any():
        raise ValueError("disk does not cover any pixel center")
    patch = img.pixels[y_lo:y_hi + 1, x_lo:x_hi + 1]
    values = patch[inside]
    return float(values.sum(dtype=np.float64) / values.size)
