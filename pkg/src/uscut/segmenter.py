"""One-shot segmentation pipeline: sample, build, cut, extract, rasterize."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .image import GrayImage
from .maxflow import max_flow_min_cut
from .radial import FlowNetwork, RayNodeGrid, TemplateParams, build_flow_network, sample_ray_nodes

__all__ = ["HelperSeed", "SegmentationResult", "segment", "apply_helper_seeds", "rasterize_mask"]


@dataclass(frozen=True)
class HelperSeed:
    """Additional user constraint: a point that must end up inside or outside."""

    x: float
    y: float
    kind: str  # 'inside' or 'outside'

    def __post_init__(self):
        if self.kind not in ("inside", "outside"):
            raise ValueError(f"helper kind must be 'inside' or 'outside', got {self.kind!r}")


@dataclass(frozen=True)
class SegmentationResult:
    """Per-ray boundary indices plus the derived contour and pixel mask.

    boundary[r] is the number of foreground nodes on ray r (0..N). The
    contour has one vertex per ray: the outermost foreground node position,
    or the seed itself for rays whose boundary collapsed to zero.
    ``collapsed`` is true when every ray collapsed.
    """

    boundary: np.ndarray        # (R,) int64
    contour: np.ndarray         # (R, 2) float64
    mask: np.ndarray            # (H, W) bool
    cut_cost: float
    elapsed_us: int
    collapsed: bool
    seed: tuple[float, float]


def _prefix_lengths(source_side: np.ndarray) -> np.ndarray:
    """Per-ray foreground prefix lengths from an (R, N) cut side matrix."""
    R, N = source_side.shape
    bg = ~source_side
    b = np.where(bg.any(axis=1), bg.argmax(axis=1), N).astype(np.int64)
    # the infinite intra-ray arcs guarantee prefix cuts; anything else means
    # the infinity sentinel was breached
    check = np.arange(N)[None, :] < b[:, None]
    if not np.array_equal(check, source_side):
        raise RuntimeError("cut is not a per-ray prefix; infinite-arc sentinel breached")
    return b


def apply_helper_seeds(net: FlowNetwork, grid: RayNodeGrid, helpers) -> FlowNetwork:
    """Bind each helper's nearest grid node to the source or the sink.

    An 'inside' helper at node (r, i) adds an infinite source arc, forcing
    the boundary on ray r beyond i; an 'outside' helper adds an infinite
    sink arc, capping it at i. Contradictory helpers on one ray (an inside
    node at or beyond an outside node) are rejected.
    """
    helpers = list(helpers)
    if not helpers:
        return net
    R, N = grid.rays, grid.nodes_per_ray
    xs = grid.positions[..., 0]
    ys = grid.positions[..., 1]
    inside_max = {}
    outside_min = {}
    extra_tails, extra_heads = [], []
    for h in helpers:
        d2 = (xs - h.x) ** 2 + (ys - h.y) ** 2
        flat = int(np.argmin(d2))
        r, i = divmod(flat, N)
        if h.kind == "inside":
            inside_max[r] = max(inside_max.get(r, -1), i)
            extra_tails.append(net.source)
            extra_heads.append(flat)
        else:
            outside_min[r] = min(outside_min.get(r, N), i)
            extra_tails.append(flat)
            extra_heads.append(net.sink)
    for r, hi in inside_max.items():
        if r in outside_min and hi >= outside_min[r]:
            raise ValueError(
                f"contradictory helpers on ray {r}: inside at node {hi} "
                f"but outside at node {outside_min[r]}")
    tails = np.concatenate([net.tails, np.asarray(extra_tails, np.int32)])
    heads = np.concatenate([net.heads, np.asarray(extra_heads, np.int32)])
    caps = np.concatenate([net.caps, np.full(len(helpers), net.inf_cap)])
    return FlowNetwork(num_interior=net.num_interior, tails=tails, heads=heads,
                       caps=caps, inf_cap=net.inf_cap, rays=net.rays,
                       nodes_per_ray=net.nodes_per_ray)


def _on_segment(px: float, py: float, x1: float, y1: float, x2: float, y2: float) -> bool:
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    if cross != 0.0:
        return False
    return min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2)


def _mark_boundary_pixels(mask: np.ndarray, pts: np.ndarray) -> None:
    """Set pixels whose centers lie exactly on a polygon edge."""
    h, w = mask.shape
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        dx, dy = x2 - x1, y2 - y1
        if dx == 0.0 and dy == 0.0:
            if x1 == int(x1) and y1 == int(y1) and 0 <= x1 < w and 0 <= y1 < h:
                mask[int(y1), int(x1)] = True
            continue
        if abs(dx) >= abs(dy):
            lo = max(0, math.ceil(min(x1, x2)))
            hi = min(w - 1, math.floor(max(x1, x2)))
            for px in range(lo, hi + 1):
                est = y1 + (px - x1) * dy / dx
                for py in (math.floor(est), math.ceil(est)):
                    if 0 <= py < h and _on_segment(px, py, x1, y1, x2, y2):
                        mask[py, px] = True
        else:
            lo = max(0, math.ceil(min(y1, y2)))
            hi = min(h - 1, math.floor(max(y1, y2)))
            for py in range(lo, hi + 1):
                est = x1 + (py - y1) * dx / dy
                for px in (math.floor(est), math.ceil(est)):
                    if 0 <= px < w and _on_segment(px, py, x1, y1, x2, y2):
                        mask[py, px] = True


def rasterize_mask(contour, width: int, height: int) -> np.ndarray:
    """Fill a closed polygon into a boolean mask.

    Scanline even-odd fill over pixel centers (integer coordinates); pixel
    centers lying exactly on a polygon edge are set as well. A fully
    collapsed contour (all vertices equal) yields an empty mask.
    """
    pts = np.asarray(contour, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("contour must be a closed polygon of at least 3 (x, y) vertices")
    mask = np.zeros((height, width), dtype=bool)
    if np.ptp(pts[:, 0]) == 0.0 and np.ptp(pts[:, 1]) == 0.0:
        return mask
    x1s, y1s = pts[:, 0], pts[:, 1]
    x2s, y2s = np.roll(x1s, -1), np.roll(y1s, -1)
    y_lo = max(0, math.ceil(float(pts[:, 1].min())))
    y_hi = min(height - 1, math.floor(float(pts[:, 1].max())))
    for y in range(y_lo, y_hi + 1):
        crossing = ((y1s <= y) & (y < y2s)) | ((y2s <= y) & (y < y1s))
        if not crossing.any():
            continue
        tpar = (y - y1s[crossing]) / (y2s[crossing] - y1s[crossing])
        xs = np.sort(x1s[crossing] + tpar * (x2s[crossing] - x1s[crossing]))
        for j in range(0, len(xs) - 1, 2):
            a = max(0, math.ceil(xs[j]))
            b = min(width - 1, math.floor(xs[j + 1]))
            if b >= a:
                mask[y, a:b + 1] = True
    _mark_boundary_pixels(mask, pts)
    return mask


def segment(img: GrayImage, seed, params: TemplateParams | None = None,
            helpers=()) -> SegmentationResult:
    """Segment around ``seed``: the full sample / build / cut / extract pipeline."""
    t0 = time.perf_counter_ns()
    params = params or TemplateParams()
    grid = sample_ray_nodes(img, seed, params)
    net = build_flow_network(grid, params.delta)
    if helpers:
        net = apply_helper_seeds(net, grid, helpers)
    cut = max_flow_min_cut(net)
    R, N = grid.rays, grid.nodes_per_ray
    boundary = _prefix_lengths(cut.source_side.reshape(R, N))
    idx = np.maximum(boundary - 1, 0)
    vertices = grid.positions[np.arange(R), idx, :].copy()
    vertices[boundary == 0] = grid.seed
    mask = rasterize_mask(vertices, img.width, img.height)
    elapsed_us = (time.perf_counter_ns() - t0) // 1000
    return SegmentationResult(boundary=boundary, contour=vertices, mask=mask,
                              cut_cost=cut.cut_capacity, elapsed_us=int(elapsed_us),
                              collapsed=bool((boundary == 0).all()), seed=grid.seed)
