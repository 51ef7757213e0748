"""uscut: interactive radial-template graph-cut segmentation for 2D grayscale images.

The package segments roughly star-shaped structures (e.g. lesions in
ultrasound B-mode images) around a single user-chosen seed point. Rays are
sent out radially from the seed, gray values are sampled along them, and an
exact s-t min-cut on the resulting template graph yields one boundary index
per ray. A delta parameter bounds how much the boundary may jump between
adjacent rays, trading smoothness against flexibility.

Also included: evaluation metrics (Dice, Hausdorff, diameters), a GrowCut
cellular-automaton baseline, a synthetic lesion phantom generator, a batch
evaluation harness, and a WebSocket service for real-time interactive use.
"""

from .image import GrayImage, load_gray_image, save_gray_image, load_mask, save_mask, sample_bilinear, mean_gray_disk
from .radial import TemplateParams, RayNodeGrid, FlowNetwork, sample_ray_nodes, terminal_arcs_for_ray, build_flow_network
from .maxflow import CutResult, max_flow_min_cut
from .segmenter import HelperSeed, SegmentationResult, segment, apply_helper_seeds, rasterize_mask
from .metrics import CaseMetrics, SummaryStats, dice, hausdorff, max_diameter, mask_area, boundary_points, summarize
from .growcut import grow_cut
from .phantom import PhantomSpec, generate_phantom

__version__ = "0.1.0"

__all__ = [
    "GrayImage", "load_gray_image", "save_gray_image", "load_mask", "save_mask",
    "sample_bilinear", "mean_gray_disk",
    "TemplateParams", "RayNodeGrid", "FlowNetwork",
    "sample_ray_nodes", "terminal_arcs_for_ray", "build_flow_network",
    "CutResult", "max_flow_min_cut",
    "HelperSeed", "SegmentationResult", "segment", "apply_helper_seeds", "rasterize_mask",
    "CaseMetrics", "SummaryStats", "dice", "hausdorff", "max_diameter", "mask_area",
    "boundary_points", "summarize",
    "grow_cut",
    "PhantomSpec", "generate_phantom",
]
