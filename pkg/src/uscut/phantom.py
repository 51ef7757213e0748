"""Synthetic lesion phantoms with analytic ground truth.

Patterns follow the usual B-mode echogenicity taxonomy: a lesion can be
brighter (hyper), equal (iso) or darker (hypo) than the background, and the
hyper/iso variants can carry a darker rim (halo) just outside the lesion
edge. Speckle is approximated by clamped multiplicative Gaussian noise;
true B-mode speckle is Rayleigh-like, but this is adequate for contrast and
robustness testing. The ground-truth mask is the exact analytic lesion
region (halo excluded) and is unaffected by noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import GrayImage

__all__ = ["PhantomSpec", "generate_phantom", "PATTERNS"]

PATTERNS = ("hyper", "iso", "hypo", "halo_hyper", "halo_iso")


@dataclass(frozen=True)
class PhantomSpec:
    """Description of one synthetic lesion image.

    ``radius`` describes a disk; pass ``axes = (rx, ry)`` for an ellipse
    instead. ``speckle_sigma`` is the relative noise level (fraction of the
    local gray value). ``halo_width`` is in pixels, ``halo_depth`` in gray
    levels below the background.
    """

    size: int = 256
    background_gray: int = 120
    pattern: str = "hypo"
    contrast: int = 50
    radius: float = 30.0
    center: tuple[float, float] | None = None
    axes: tuple[float, float] | None = None
    halo_width: float = 6.0
    halo_depth: int = 40
    speckle_sigma: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise ValueError(f"pattern must be one of {PATTERNS}, got {self.pattern!r}")
        if self.size < 8:
            raise ValueError("size too small")
        b = self.background_gray
        if self.pattern in ("hyper", "halo_hyper") and not 0 <= b + self.contrast <= 255:
            raise ValueError("background + contrast outside [0, 255]")
        if self.pattern == "hypo" and not 0 <= b - self.contrast <= 255:
            raise ValueError("background - contrast outside [0, 255]")
        if self.pattern.startswith("halo") and b - self.halo_depth < 0:
            raise ValueError("background - halo_depth below 0")
        if self.speckle_sigma < 0:
            raise ValueError("speckle_sigma must be >= 0")
        cx, cy = self.effective_center
        rx, ry = self.effective_axes
        margin_x = rx + (self.halo_width if self.pattern.startswith("halo") else 0)
        margin_y = ry + (self.halo_width if self.pattern.startswith("halo") else 0)
        if cx - margin_x < 0 or cx + margin_x > self.size - 1 \
                or cy - margin_y < 0 or cy + margin_y > self.size - 1:
            raise ValueError("lesion (plus halo) does not fit inside the image")

    @property
    def effective_center(self) -> tuple[float, float]:
        if self.center is not None:
            return (float(self.center[0]), float(self.center[1]))
        c = (self.size - 1) / 2.0
        return (c, c)

    @property
    def effective_axes(self) -> tuple[float, float]:
        if self.axes is not None:
            return (float(self.axes[0]), float(self.axes[1]))
        return (float(self.radius), float(self.radius))


def generate_phantom(spec: PhantomSpec) -> tuple[GrayImage, np.ndarray]:
    """Render the phantom; returns (image, ground-truth lesion mask)."""
    n = spec.size
    cx, cy = spec.effective_center
    rx, ry = spec.effective_axes
    ys, xs = np.mgrid[0:n, 0:n].astype(np.float64)
    norm = np.sqrt(((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2)
    lesion = norm <= 1.0

    b = float(spec.background_gray)
    base = np.full((n, n), b)
    if spec.pattern in ("hyper", "halo_hyper"):
        base[lesion] = b + spec.contrast
    elif spec.pattern == "hypo":
        base[lesion] = b - spec.contrast
    # iso and halo_iso keep the lesion at the background gray
    if spec.pattern.startswith("halo"):
        # ring just outside the lesion edge; for a disk this is exactly
        # radius < d <= radius + halo_width
        mean_axis = (rx + ry) / 2.0
        ring = (norm > 1.0) & (norm <= 1.0 + spec.halo_width / mean_axis)
        base[ring] = b - spec.halo_depth

    if spec.speckle_sigma > 0:
        rng = np.random.default_rng(spec.rng_seed)
        eta = rng.standard_normal((n, n))
        base = np.clip(base * (1.0 + spec.speckle_sigma * eta), 0.0, 255.0)
    pixels = np.rint(base).astype(np.uint8)
    return GrayImage(pixels), lesion
