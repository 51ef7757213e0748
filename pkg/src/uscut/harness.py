"""Batch evaluation: segment a manifest of cases and write a CSV report.

The manifest is a JSON array of case objects::

    {"id": "case01", "image": "img.png", "seed": [128, 96],
     "gt_mask": "gt.png", "spacing_mm": 0.2,
     "params": {"rays": 60, "nodes": 40, "radius": 120, "delta": 2,
                "seed_region": 5},
     "helpers": [{"x": 100, "y": 80, "kind": "inside"}]}

Only ``id``, ``image`` and ``seed`` are required. Cases without a ground
truth get geometry-only rows. Report rows keep the manifest order; floats
are fixed to 4 decimals so identical inputs reproduce identical bytes.
Per-case wall times go to stderr, not into the report, for the same reason.
"""

from __future__ import annotations

import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .image import load_gray_image, load_mask
from .metrics import CaseMetrics, dice, hausdorff, mask_area, max_diameter, summarize
from .radial import TemplateParams
from .segmenter import HelperSeed, segment

__all__ = ["run_batch", "evaluate_case", "params_from_dict", "REPORT_COLUMNS"]

REPORT_COLUMNS = [
    "id", "max_diameter_algo", "max_diameter_ref", "area_algo", "area_ref",
    "pixels_algo", "pixels_ref", "dsc_pct", "hd_px", "helper_seeds",
]

_PARAM_KEYS = {"rays": "rays", "nodes": "nodes_per_ray", "radius": "max_radius",
               "delta": "delta", "seed_region": "seed_region_radius"}


def params_from_dict(overrides: dict | None) -> TemplateParams:
    kwargs = {}
    for key, attr in _PARAM_KEYS.items():
        if overrides and key in overrides:
            kwargs[attr] = overrides[key]
    return TemplateParams(**kwargs)


def evaluate_case(entry: dict, base_dir: Path | None = None) -> CaseMetrics:
    """Segment one manifest entry and compute its metrics."""
    base = Path(base_dir) if base_dir else Path(".")
    img = load_gray_image(base / entry["image"], spacing_mm=entry.get("spacing_mm"))
    params = params_from_dict(entry.get("params"))
    helpers = [HelperSeed(h["x"], h["y"], h["kind"]) for h in entry.get("helpers", [])]
    result = segment(img, tuple(entry["seed"]), params, helpers=helpers)
    print(f"[eval] case {entry['id']}: {result.elapsed_us / 1000:.1f} ms"
          f"{' (collapsed)' if result.collapsed else ''}", file=sys.stderr)

    spacing = img.spacing_mm if img.spacing_mm else 1.0
    algo = result.mask
    pixels_algo = int(algo.sum())
    diam_algo = max_diameter(algo, spacing) if pixels_algo else 0.0
    area_algo = mask_area(algo, spacing)

    if "gt_mask" not in entry or entry["gt_mask"] is None:
        return CaseMetrics(dsc=None, hd=None, max_diameter_algo=diam_algo,
                           max_diameter_ref=None, area_algo=area_algo,
                           area_ref=None, pixels_algo=pixels_algo,
                           pixels_ref=None, helper_seed_count=len(helpers))

    ref = load_mask(base / entry["gt_mask"])
    if ref.shape != algo.shape:
        raise ValueError(f"case {entry['id']}: ground-truth size {ref.shape} "
                         f"does not match image {algo.shape}")
    dsc = dice(algo, ref) if (pixels_algo + ref.sum()) else None
    hd = hausdorff(algo, ref) if (pixels_algo and ref.any()) else None
    return CaseMetrics(
        dsc=dsc, hd=hd,
        max_diameter_algo=diam_algo,
        max_diameter_ref=max_diameter(ref, spacing) if ref.any() else 0.0,
        area_algo=area_algo, area_ref=mask_area(ref, spacing),
        pixels_algo=pixels_algo, pixels_ref=int(ref.sum()),
        helper_seed_count=len(helpers))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.4f}"


def _row(case_id: str, m: CaseMetrics) -> list[str]:
    return [case_id,
            _fmt(m.max_diameter_algo), _fmt(m.max_diameter_ref),
            _fmt(m.area_algo), _fmt(m.area_ref),
            _fmt(m.pixels_algo), _fmt(m.pixels_ref),
            _fmt(m.dsc * 100.0 if m.dsc is not None else None),
            _fmt(m.hd), _fmt(m.helper_seed_count)]


def run_batch(manifest_path, report_path, parallel: int = 1):
    """Evaluate every manifest case, write the CSV report and return the
    per-metric summary statistics."""
    manifest_path = Path(manifest_path)
    entries = json.loads(manifest_path.read_text())
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"{manifest_path}: manifest must be a non-empty JSON array")
    for k, entry in enumerate(entries):
        for required in ("id", "image", "seed"):
            if required not in entry:
                raise ValueError(f"{manifest_path}: entry {k} lacks {required!r}")
    base_dir = manifest_path.parent

    def run_one(entry):
        try:
            return evaluate_case(entry, base_dir)
        except Exception as exc:
            raise RuntimeError(f"case {entry['id']} failed: {exc}") from exc

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(run_one, entries))
    else:
        results = [run_one(e) for e in entries]

    stats = summarize(results)
    metric_for_column = {
        "max_diameter_algo": "max_diameter_algo", "max_diameter_ref": "max_diameter_ref",
        "area_algo": "area_algo", "area_ref": "area_ref",
        "pixels_algo": "pixels_algo", "pixels_ref": "pixels_ref",
        "dsc_pct": "dsc", "hd_px": "hd", "helper_seeds": "helper_seed_count",
    }
    with open(report_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for entry, m in zip(entries, results):
            writer.writerow(_row(entry["id"], m))
        for stat_name in ("min", "max", "mean", "std"):
            row = [stat_name]
            for col in REPORT_COLUMNS[1:]:
                metric = metric_for_column[col]
                if metric in stats:
                    value = getattr(stats[metric], stat_name)
                    if metric == "dsc":
                        value *= 100.0
                    row.append(f"{value:.4f}")
                else:
                    row.append("")
            writer.writerow(row)
    return stats
