"""Radial node template and construction of the capacitated s-t flow network.

A circular template of R rays is centered on the seed point. Along each ray,
N nodes are sampled at equidistant radii; the gray value behind each node is
compared against the average gray around the seed, giving a per-node cost.
Terminal arc capacities are derived from the signed differences of adjacent
costs along a ray, while infinite intra-ray arcs enforce that each ray is
cut at most once (a star-shape result) and infinite inter-ray arcs bound the
boundary-index jump between adjacent rays by the delta parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GrayImage, mean_gray_disk, sample_bilinear

__all__ = [
    "TemplateParams", "RayNodeGrid", "FlowNetwork",
    "sample_ray_nodes", "terminal_arcs_for_ray", "build_flow_network",
]


@dataclass(frozen=True)
class TemplateParams:
    """Parameters of the radial template.

    rays:               number of rays R emitted from the seed
    nodes_per_ray:      number of nodes N sampled along each ray
    max_radius:         radius (pixels) of the outermost node on each ray
    delta:              max boundary-index difference between adjacent rays
    seed_region_radius: radius (pixels) of the disk used for the seed average
    """

    rays: int = 60
    nodes_per_ray: int = 40
    max_radius: float = 120.0
    delta: int = 2
    seed_region_radius: float = 5.0

    def __post_init__(self):
        if self.rays < 3:
            raise ValueError("rays must be >= 3")
        if self.nodes_per_ray < 2:
            raise ValueError("nodes_per_ray must be >= 2")
        if not self.max_radius > 0:
            raise ValueError("max_radius must be > 0")
        if self.delta < 0 or int(self.delta) != self.delta:
            raise ValueError("delta must be a non-negative integer")
        if not self.seed_region_radius > 0:
            raise ValueError("seed_region_radius must be > 0")


@dataclass(frozen=True)
class RayNodeGrid:
    """Sampled node grid: positions, gray values and costs, plus the seed average.

    positions[r, i] is the (x, y) of node i on ray r. Ray angles advance
    clockwise in image coordinates (y down); node i sits at radial distance
    (i + 1) * max_radius / N, so no node coincides with the seed itself.
    costs[r, i] = |avg - gray[r, i]|.
    """

    positions: np.ndarray  # (R, N, 2) float64
    gray: np.ndarray       # (R, N) float64
    costs: np.ndarray      # (R, N) float64
    avg: float
    seed: tuple[float, float]

    @property
    def rays(self) -> int:
        return self.positions.shape[0]

    @property
    def nodes_per_ray(self) -> int:
        return self.positions.shape[1]


@dataclass(frozen=True)
class FlowNetwork:
    """Directed flow network over the grid nodes plus virtual source and sink.

    Interior node (r, i) has index r * N + i; the source is node
    ``num_interior`` and the sink ``num_interior + 1``. ``inf_cap`` is the
    finite stand-in for infinity: strictly greater than the total finite
    capacity plus one, so it can never pay off to cut such an arc while a
    finite cut exists.
    """

    num_interior: int
    tails: np.ndarray  # (M,) int32
    heads: np.ndarray  # (M,) int32
    caps: np.ndarray   # (M,) float64
    inf_cap: float
    rays: int = 0
    nodes_per_ray: int = 0

    @property
    def source(self) -> int:
        return self.num_interior

    @property
    def sink(self) -> int:
        return self.num_interior + 1

    @property
    def num_arcs(self) -> int:
        return len(self.tails)

    def dump_arcs(self, fp) -> None:
        """Write a plain-text arc list (tail head capacity), one per line."""
        for t, h, c in zip(self.tails, self.heads, self.caps):
            fp.write(f"{int(t)} {int(h)} {float(c)!r}\n")


def sample_ray_nodes(img: GrayImage, seed, params: TemplateParams) -> RayNodeGrid:
    """Sample the radial node grid around ``seed`` and compute node costs.

    Ray r points at angle 2*pi*r/R (measured from the +x axis, rotating
    clockwise on screen since y points down). Gray values are bilinear
    samples at the node positions; costs are absolute deviations from the
    mean gray in the seed disk.
    """
    sx, sy = float(seed[0]), float(seed[1])
    if not img.contains(sx, sy):
        raise ValueError(f"seed ({sx}, {sy}) lies outside the image")
    R, N = params.rays, params.nodes_per_ray
    angles = 2.0 * np.pi * np.arange(R, dtype=np.float64) / R
    radii = (np.arange(N, dtype=np.float64) + 1.0) * (params.max_radius / N)
    xs = sx + np.cos(angles)[:, None] * radii[None, :]
    ys = sy + np.sin(angles)[:, None] * radii[None, :]
    gray = sample_bilinear(img, xs, ys)
    avg = mean_gray_disk(img, (sx, sy), params.seed_region_radius)
    costs = np.abs(avg - gray)
    positions = np.stack([xs, ys], axis=-1)
    return RayNodeGrid(positions=positions, gray=gray, costs=costs, avg=avg, seed=(sx, sy))


def _terminal_caps(costs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Source and sink capacities per node for one or more rays.

    ``costs`` has shape (..., N). The first node binds to the source with
    its absolute cost, the last to the sink with its absolute cost. Every
    node in between gets the difference w = c[i] - c[i-1]: to the sink when
    w >= 0, to the source with |w| when negative.
    """
    c = np.asarray(costs, dtype=np.float64)
    n = c.shape[-1]
    if n < 2:
        raise ValueError("need at least 2 nodes per ray")
    src = np.zeros_like(c)
    snk = np.zeros_like(c)
    src[..., 0] = c[..., 0]
    snk[..., -1] = c[..., -1]
    w = c[..., 1:n - 1] - c[..., 0:n - 2]
    snk[..., 1:n - 1] = np.where(w >= 0, w, 0.0)
    src[..., 1:n - 1] = np.where(w < 0, -w, 0.0)
    return src, snk


def terminal_arcs_for_ray(costs) -> list[tuple[int, str, float]]:
    """Terminal arcs for a single ray of node costs.

    Returns (node index, 'source' | 'sink', capacity) triples in node order;
    zero-capacity arcs are omitted since they cannot affect any cut.
    """
    src, snk = _terminal_caps(np.asarray(costs, dtype=np.float64))
    arcs: list[tuple[int, str, float]] = []
    for i in range(len(src)):
        if src[i] > 0:
            arcs.append((i, "source", float(src[i])))
        if snk[i] > 0:
            arcs.append((i, "sink", float(snk[i])))
    return arcs


def build_flow_network(grid: RayNodeGrid, delta: int) -> FlowNetwork:
    """Assemble the full flow network for a sampled grid and a delta value.

    Arcs, in deterministic order:
      * intra-ray: node (r, i) -> (r, i-1) for i >= 1, infinite capacity;
        any finite cut therefore separates each ray into a foreground prefix
        and a background suffix.
      * inter-ray: node (r, i) -> (r', max(0, i - delta)) for both angular
        neighbors r' of r, infinite capacity; any finite cut then satisfies
        |b_r - b_r'| <= delta for the per-ray prefix lengths b.
      * terminal: per-ray arcs from ``terminal_arcs_for_ray``, zero
        capacities omitted.
    """
    if delta < 0 or int(delta) != delta:
        raise ValueError("delta must be a non-negative integer")
    delta = int(delta)
    R, N = grid.rays, grid.nodes_per_ray
    s, t = R * N, R * N + 1
    node = np.arange(R * N, dtype=np.int64).reshape(R, N)

    # intra arcs
    intra_tails = node[:, 1:].reshape(-1)
    intra_heads = node[:, :-1].reshape(-1)

    # inter arcs to both angular neighbors (wrap-around included)
    tgt_i = np.maximum(0, np.arange(N, dtype=np.int64) - delta)
    prev_r = (np.arange(R, dtype=np.int64) - 1) % R
    next_r = (np.arange(R, dtype=np.int64) + 1) % R
    inter_tails = np.concatenate([node.reshape(-1), node.reshape(-1)])
    inter_heads = np.concatenate([
        (prev_r[:, None] * N + tgt_i[None, :]).reshape(-1),
        (next_r[:, None] * N + tgt_i[None, :]).reshape(-1),
    ])

    # terminal arcs
    src_caps, snk_caps = _terminal_caps(grid.costs)
    src_idx = np.flatnonzero(src_caps.reshape(-1) > 0)
    snk_idx = np.flatnonzero(snk_caps.reshape(-1) > 0)
    finite_total = float(src_caps.sum(dtype=np.float64) + snk_caps.sum(dtype=np.float64))
    inf_cap = finite_total + 2.0

    n_inf = len(intra_tails) + len(inter_tails)
    tails = np.concatenate([intra_tails, inter_tails, src_idx * 0 + s, snk_idx]).astype(np.int32)
    heads = np.concatenate([intra_heads, inter_heads, src_idx, snk_idx * 0 + t]).astype(np.int32)
    caps = np.concatenate([
        np.full(n_inf, inf_cap),
        src_caps.reshape(-1)[src_idx],
        snk_caps.reshape(-1)[snk_idx],
    ])
    return FlowNetwork(num_interior=R * N, tails=tails, heads=heads, caps=caps,
                       inf_cap=inf_cap, rays=R, nodes_per_ray=N)
