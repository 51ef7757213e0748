"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines and the measured values behind them.

Note on the phantom-quality criterion (C6): the terminal-weight scheme under
test telescopes along each ray, so the relative cost of a cut depends only
on the cost |avg - gray| of the outermost foreground node (see
docs/cost-model.md). On a homogeneous-interior phantom that node is selected
by noise, not by the lesion edge, so the contour does not systematically hug
the edge and the encoded DSC/HD targets are not reachable by this cost
model. The thresholds are asserted as specified rather than weakened; the
test documents the actual values it measured.
"""

import os
import statistics
import time

import numpy as np
import pytest

from uscut.image import GrayImage
from uscut.maxflow import max_flow_min_cut, warm_up
from uscut.metrics import dice, hausdorff
from uscut.phantom import PhantomSpec, generate_phantom
from uscut.radial import (TemplateParams, _terminal_caps, build_flow_network,
                          sample_ray_nodes, terminal_arcs_for_ray)
from uscut.segmenter import _prefix_lengths, segment

from oracles import (brute_force_min_cut, dice_naive, enumerate_boundary_min,
                     hausdorff_naive)
from test_maxflow import random_network
from test_radial import make_grid


def report(criterion: str, ok: bool, detail: str = ""):
    print(f"\n[acceptance] {criterion}: {'PASS' if ok else 'FAIL'}"
          f"{' | ' + detail if detail else ''}")
    assert ok, f"{criterion} failed: {detail}"


def centered_seed(img: GrayImage) -> tuple[float, float]:
    return ((img.width - 1) / 2.0, (img.height - 1) / 2.0)


# -- C1: worked terminal-weight example ------------------------------------

def test_c1_terminal_weight_worked_example():
    t0 = time.perf_counter()
    arcs_a = terminal_arcs_for_ray([9, 10, 6, 55, 60, 31])
    arcs_b = terminal_arcs_for_ray([5, 1, 2, 45, 60, 40])
    ok_a = ({(i, c) for i, s, c in arcs_a if s == "source"} == {(0, 9.0), (2, 4.0)}
            and {(i, c) for i, s, c in arcs_a if s == "sink"}
            == {(1, 1.0), (3, 49.0), (4, 5.0), (5, 31.0)})
    ok_b = ({(i, c) for i, s, c in arcs_b if s == "source"} == {(0, 5.0), (1, 4.0)}
            and {(i, c) for i, s, c in arcs_b if s == "sink"}
            == {(2, 1.0), (3, 43.0), (4, 15.0), (5, 40.0)})
    elapsed = time.perf_counter() - t0
    report("C1 terminal-weight worked example",
           ok_a and ok_b and elapsed < 1.0,
           f"transition weights 49/43 present, {elapsed * 1e3:.1f} ms")


# -- C2: cut cost equals exhaustive boundary enumeration --------------------

def test_c2_cut_cost_matches_exhaustive_enumeration():
    rng = np.random.default_rng(20240)
    t0 = time.perf_counter()
    checked = 0
    for _ in range(1000):
        R = int(rng.integers(3, 9))
        N = int(rng.integers(2, 7))
        delta = int(rng.integers(0, 3))
        costs = rng.integers(0, 21, (R, N)).astype(float)
        net = build_flow_network(make_grid(costs), delta)
        cut = max_flow_min_cut(net)
        src, snk = _terminal_caps(costs)
        expect, _ = enumerate_boundary_min(src, snk, delta)
        assert cut.max_flow_value == expect, (R, N, delta, costs)
        assert cut.cut_capacity == expect
        checked += 1
    elapsed = time.perf_counter() - t0
    report("C2 min-cut vs exhaustive boundary enumeration",
           checked == 1000 and elapsed < 60.0,
           f"{checked} instances, exact, {elapsed:.1f} s")


# -- C3: max-flow duality against partition brute force ---------------------

def test_c3_maxflow_duality_brute_force():
    rng = np.random.default_rng(777)
    t0 = time.perf_counter()
    for _ in range(1000):
        net = random_network(rng)
        cut = max_flow_min_cut(net)
        expect = brute_force_min_cut(net.num_interior, net.tails, net.heads, net.caps)
        assert cut.max_flow_value == expect
        assert cut.cut_capacity == expect
    elapsed = time.perf_counter() - t0
    report("C3 max-flow duality vs 2^n partitions",
           elapsed < 60.0, f"1000 networks, exact, {elapsed:.1f} s")


# -- C4: star shape (prefix) and delta constraints everywhere ---------------

def sweep_images():
    out = []
    for k, pattern in enumerate(("hypo", "hyper", "halo_iso", "halo_hyper", "iso")):
        spec = PhantomSpec(size=192, pattern=pattern, contrast=40, radius=25,
                           background_gray=120, speckle_sigma=0.08, rng_seed=k)
        out.append(generate_phantom(spec)[0])
    rng = np.random.default_rng(1)
    out.append(GrayImage(rng.integers(0, 256, (160, 160), dtype=np.uint8)))
    out.append(GrayImage(np.full((160, 160), 50, np.uint8)))
    return out


def test_c4_star_shape_and_delta_constraints():
    violations = 0
    segmentations = 0
    for img in sweep_images():
        for delta in (0, 1, 2, 3):
            for rays, nodes in ((12, 10), (24, 16), (60, 40)):
                params = TemplateParams(rays=rays, nodes_per_ray=nodes,
                                        max_radius=70, delta=delta)
                seed = centered_seed(img)
                grid = sample_ray_nodes(img, seed, params)
                net = build_flow_network(grid, delta)
                cut = max_flow_min_cut(net)
                side = cut.source_side.reshape(rays, nodes)
                b = np.where((~side).any(1), (~side).argmax(1), nodes)
                prefix_ok = np.array_equal(
                    side, np.arange(nodes)[None, :] < b[:, None])
                delta_ok = np.abs(b - np.roll(b, -1)).max() <= delta
                res = segment(img, seed, params)
                match_ok = np.array_equal(res.boundary, b)
                segmentations += 1
                if not (prefix_ok and delta_ok and match_ok):
                    violations += 1
    report("C4 star-shape prefix + delta constraints",
           violations == 0, f"{segmentations} segmentations, 0 violations")


# -- C5: delta behavior ------------------------------------------------------

def test_c5_delta_zero_circle_and_monotone_cost():
    equal_levels = True
    for img in sweep_images():
        res = segment(img, centered_seed(img),
                      TemplateParams(rays=24, nodes_per_ray=16, max_radius=70,
                                     delta=0))
        equal_levels &= res.boundary.min() == res.boundary.max()

    monotone = True
    worst = None
    for k in range(20):
        spec = PhantomSpec(size=300, pattern="hypo", contrast=50, radius=30,
                           speckle_sigma=0.08, rng_seed=100 + k)
        img, _ = generate_phantom(spec)
        seed = centered_seed(img)
        costs = [segment(img, seed, TemplateParams(delta=d)).cut_cost
                 for d in range(6)]
        for a, b in zip(costs, costs[1:]):
            if b > a:
                monotone = False
                worst = costs
    report("C5 delta-zero circle + cost monotone in delta",
           equal_levels and monotone,
           "20 phantoms, deltas 0..5" + (f", violation {worst}" if worst else ""))


# -- C6: phantom quality -----------------------------------------------------
# The stated noise level "sigma = 8" is read as 8 percent (0.08) relative
# noise: fed raw into the multiplicative noise formula it saturates the
# image to binary extremes, which no segmentation could recover.

def test_c6_phantom_quality():
    t0 = time.perf_counter()
    params = TemplateParams()  # defaults
    hypo_vals = []
    for k in range(20):
        spec = PhantomSpec(size=256, background_gray=120, pattern="hypo",
                           contrast=50, radius=30.0, speckle_sigma=0.08,
                           rng_seed=1000 + k)
        img, gt = generate_phantom(spec)
        res = segment(img, centered_seed(img), params)
        dsc = dice(res.mask, gt) if res.mask.any() else 0.0
        hd = hausdorff(res.mask, gt) if res.mask.any() else float("inf")
        hypo_vals.append((dsc, hd))
    halo_vals = []
    for k in range(5):
        spec = PhantomSpec(size=256, background_gray=120, pattern="halo_iso",
                           contrast=50, radius=30.0, halo_width=6, halo_depth=40,
                           speckle_sigma=0.08, rng_seed=2000 + k)
        img, gt = generate_phantom(spec)
        res = segment(img, centered_seed(img), params)
        halo_vals.append(dice(res.mask, gt) if res.mask.any() else 0.0)
    elapsed = time.perf_counter() - t0

    dsc_min = min(v[0] for v in hypo_vals)
    hd_max = max(v[1] for v in hypo_vals)
    halo_min = min(halo_vals)
    detail = (f"hypo: DSC min {dsc_min:.3f} (need >= 0.95), HD max {hd_max:.1f} px "
              f"(need <= 3); halo_iso: DSC min {halo_min:.3f} (need >= 0.90); "
              f"{elapsed:.1f} s")
    ok = dsc_min >= 0.95 and hd_max <= 3.0 and halo_min >= 0.90 and elapsed < 10.0
    report("C6 phantom quality at default parameters", ok, detail)


# -- C7: metric oracles ------------------------------------------------------

def test_c7_metric_oracles():
    rng = np.random.default_rng(12)
    for _ in range(50):
        shape = (int(rng.integers(4, 33)), int(rng.integers(4, 33)))
        a = rng.random(shape) < 0.35
        r = rng.random(shape) < 0.35
        a[shape[0] // 2, shape[1] // 2] = True
        r[shape[0] // 2, shape[1] // 2] = True
        assert dice(a, r) == dice_naive(a, r)
        assert hausdorff(a, r) == hausdorff_naive(a, r)
    worked_a = np.zeros((6, 6), bool)
    worked_r = np.zeros((6, 6), bool)
    worked_a[0:3, 0:3] = True
    worked_r[0:3, 0:2] = True
    report("C7 metric brute-force oracles",
           dice(worked_a, worked_r) == 0.8,
           "50 random mask pairs exact; dice(9,6,6) = 0.8")


# -- C8: real-time budget ----------------------------------------------------

def test_c8_real_time_budget():
    spec = PhantomSpec(size=512, background_gray=120, pattern="hypo",
                       contrast=50, radius=80, speckle_sigma=0.08, rng_seed=7)
    img, _ = generate_phantom(spec)
    seed = centered_seed(img)
    params = TemplateParams()  # R=60, N=40, radius=120, delta=2
    warm_up()
    segment(img, seed, params)  # warm the full pipeline once
    times = []
    for _ in range(60):
        t0 = time.perf_counter()
        segment(img, seed, params)
        times.append((time.perf_counter() - t0) * 1000.0)
    med = statistics.median(times)
    p99 = sorted(times)[int(0.99 * (len(times) - 1))]
    report("C8 real-time budget (512x512, default template)",
           med < 50.0 and p99 < 100.0,
           f"median {med:.2f} ms (< 50), p99 {p99:.2f} ms (< 100)")


# -- C9: clinical sanity band (reported, not asserted) -----------------------

def test_c9_clinical_sanity_band(tmp_path):
    manifest = os.environ.get("USCUT_CLINICAL_MANIFEST")
    if not manifest:
        pytest.skip("no clinical manifest provided (set USCUT_CLINICAL_MANIFEST); "
                    "the 0.75-0.92 mean-DSC band is reported, not asserted")
    from uscut.harness import run_batch
    stats = run_batch(manifest, tmp_path / "clinical.csv")
    mean_dsc = stats["dsc"].mean
    in_band = 0.75 <= mean_dsc <= 0.92
    print(f"\n[acceptance] C9 clinical sanity band: mean DSC {mean_dsc:.4f}, "
          f"{'inside' if in_band else 'OUTSIDE'} the 0.75-0.92 band "
          "(reported, not asserted; results are operator dependent)")


# -- C10: affine gray invariance ---------------------------------------------

def affine_phantom(k: int) -> GrayImage:
    pattern = ("hypo", "halo_iso", "halo_hyper")[k % 3]
    spec = PhantomSpec(size=192, background_gray=60, pattern=pattern,
                       contrast=25, radius=26.0 + k, halo_width=5, halo_depth=20,
                       speckle_sigma=0.08, rng_seed=3000 + k)
    img, _ = generate_phantom(spec)
    # drop to even values so that halving stays integral
    return GrayImage((img.pixels & 0xFE).astype(np.uint8))


def test_c10_affine_gray_invariance():
    transforms = ((2.0, 0.0), (1.0, 30.0), (0.5, 10.0))
    params = TemplateParams(rays=32, nodes_per_ray=24, max_radius=70)
    checked = 0
    for k in range(10):
        img = affine_phantom(k)
        assert int(img.pixels.max()) <= 126  # no clamping under any transform
        seed = centered_seed(img)
        base = segment(img, seed, params).boundary
        for a, beta in transforms:
            vals = a * img.pixels.astype(np.float64) + beta
            assert np.all(vals == np.rint(vals)) and vals.max() <= 255 and vals.min() >= 0
            timg = GrayImage(vals.astype(np.uint8))
            got = segment(timg, seed, params).boundary
            assert np.array_equal(got, base), (k, a, beta, base, got)
            checked += 1
    report("C10 affine gray invariance", checked == 30,
           "10 phantoms x 3 transforms, boundary indices identical")
