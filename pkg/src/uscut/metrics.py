"""Segmentation evaluation: Dice overlap, Hausdorff distance, diameters, areas."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

__all__ = [
    "dice", "hausdorff", "boundary_points", "max_diameter", "mask_area",
    "CaseMetrics", "SummaryStats", "summarize",
]


def _as_mask(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError("mask must be 2D")
    return a.astype(bool)


def dice(a, r) -> float:
    """Dice overlap 2|A .. R| / (|A| + |R|) between two equally sized masks."""
    a, r = _as_mask(a), _as_mask(r)
    if a.shape != r.shape:
        raise ValueError(f"mask dimensions differ: {a.shape} vs {r.shape}")
    na, nr = int(a.sum()), int(r.sum())
    if na + nr == 0:
        raise ValueError("Dice is undefined for two empty masks")
    return 2.0 * int(np.logical_and(a, r).sum()) / (na + nr)


def boundary_points(mask) -> np.ndarray:
    """Centers (x, y) of boundary pixels: set pixels with an unset 4-neighbor
    or lying on the image edge."""
    m = _as_mask(mask)
    padded = np.pad(m, 1, constant_values=False)
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1] &
                padded[1:-1, :-2] & padded[1:-1, 2:])
    ys, xs = np.nonzero(m & ~interior)
    return np.stack([xs, ys], axis=1).astype(np.int64)


def _directed_max_min_sq(a: np.ndarray, b: np.ndarray) -> int:
    """max over points of a of the min squared distance to b (exact ints)."""
    worst = 0
    # chunked to bound the pairwise distance matrix size
    for lo in range(0, len(a), 512):
        chunk = a[lo:lo + 512]
        d2 = ((chunk[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        worst = max(worst, int(d2.min(axis=1).max()))
    return worst


def hausdorff(a, r) -> float:
    """Symmetric Hausdorff distance (pixels) between the boundary-pixel
    centers of two non-empty masks."""
    a, r = _as_mask(a), _as_mask(r)
    if a.shape != r.shape:
        raise ValueError(f"mask dimensions differ: {a.shape} vs {r.shape}")
    pa, pr = boundary_points(a), boundary_points(r)
    if len(pa) == 0 or len(pr) == 0:
        raise ValueError("Hausdorff distance is undefined for an empty mask")
    worst = max(_directed_max_min_sq(pa, pr), _directed_max_min_sq(pr, pa))
    return math.sqrt(worst)


def max_diameter(mask, spacing: float = 1.0) -> float:
    """Largest pairwise distance between boundary pixel centers, scaled by
    the pixel spacing."""
    pts = boundary_points(mask)
    if len(pts) == 0:
        raise ValueError("max_diameter is undefined for an empty mask")
    worst = 0
    for lo in range(0, len(pts), 512):
        chunk = pts[lo:lo + 512]
        d2 = ((chunk[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        worst = max(worst, int(d2.max()))
    return math.sqrt(worst) * spacing


def mask_area(mask, spacing: float = 1.0) -> float:
    """Set-pixel count times the squared pixel spacing."""
    return float(_as_mask(mask).sum()) * spacing * spacing


@dataclass(frozen=True)
class CaseMetrics:
    """One evaluated case. dsc/hd are None when no reference was available
    (or a mask was empty, leaving the Hausdorff distance undefined)."""

    dsc: float | None
    hd: float | None
    max_diameter_algo: float
    max_diameter_ref: float | None
    area_algo: float
    area_ref: float | None
    pixels_algo: int
    pixels_ref: int | None
    helper_seed_count: int = 0


@dataclass(frozen=True)
class SummaryStats:
    min: float
    max: float
    mean: float
    std: float  # sample standard deviation (n - 1); 0.0 for a single value


def _summary(values: list[float]) -> SummaryStats:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return SummaryStats(min=float(arr.min()), max=float(arr.max()),
                        mean=float(arr.mean()), std=std)


def summarize(cases) -> dict[str, SummaryStats]:
    """Per-metric min / max / mean / sample std over a list of cases.

    Metrics that are None for some case are summarized over the cases that
    do have them; a metric missing everywhere is left out.
    """
    cases = list(cases)
    if not cases:
        raise ValueError("no cases to summarize")
    out: dict[str, SummaryStats] = {}
    for f in fields(CaseMetrics):
        values = [float(getattr(c, f.name)) for c in cases if getattr(c, f.name) is not None]
        if values:
            out[f.name] = _summary(values)
    return out
