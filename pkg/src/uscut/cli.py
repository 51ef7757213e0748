"""Command-line interface: segment, eval, phantom, serve."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .harness import run_batch
from .image import load_gray_image, save_gray_image, save_mask
from .phantom import PATTERNS, PhantomSpec, generate_phantom
from .radial import TemplateParams
from .segmenter import HelperSeed, segment


def _parse_xy(text: str) -> tuple[float, float]:
    try:
        x, y = text.split(",")
        return float(x), float(y)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y - got {text!r}")


def _parse_helper(text: str) -> HelperSeed:
    parts = text.split(",")
    if len(parts) != 3 or parts[2] not in ("inside", "outside"):
        raise argparse.ArgumentTypeError(
            f"expected X,Y,inside or X,Y,outside - got {text!r}")
    return HelperSeed(float(parts[0]), float(parts[1]), parts[2])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscut",
        description="Interactive radial graph-cut segmentation for 2D grayscale images")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment one image around a seed point")
    seg.add_argument("--image", required=True)
    seg.add_argument("--seed", required=True, type=_parse_xy, metavar="X,Y")
    seg.add_argument("--rays", type=int, default=60)
    seg.add_argument("--nodes", type=int, default=40)
    seg.add_argument("--radius", type=float, default=120.0)
    seg.add_argument("--delta", type=int, default=2)
    seg.add_argument("--seed-region", type=float, default=5.0)
    seg.add_argument("--helper", action="append", type=_parse_helper, default=[],
                     metavar="X,Y,KIND")
    seg.add_argument("--out-mask", required=True)
    seg.add_argument("--out-contour")

    ev = sub.add_parser("eval", help="run a manifest of cases and write a CSV report")
    ev.add_argument("--manifest", required=True)
    ev.add_argument("--report", required=True)
    ev.add_argument("--parallel", type=int, default=1)

    ph = sub.add_parser("phantom", help="generate a synthetic lesion image plus ground truth")
    ph.add_argument("--pattern", choices=PATTERNS, required=True)
    ph.add_argument("--size", type=int, default=256)
    ph.add_argument("--bg", type=int, default=120)
    ph.add_argument("--contrast", type=int, default=50)
    ph.add_argument("--sigma", type=float, default=0.0)
    ph.add_argument("--rng", type=int, default=0)
    ph.add_argument("--lesion-radius", type=float, default=None)
    ph.add_argument("--center", type=_parse_xy, default=None, metavar="X,Y")
    ph.add_argument("--halo-width", type=float, default=6.0)
    ph.add_argument("--halo-depth", type=int, default=40)
    ph.add_argument("--out-image", required=True)
    ph.add_argument("--out-gt", required=True)

    sv = sub.add_parser("serve", help="run the interactive segmentation service")
    sv.add_argument("--port", type=int, default=8080)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--ui-dir", default=None,
                    help="directory with a built web viewer to serve at /")
    return parser


def _cmd_segment(args) -> int:
    img = load_gray_image(args.image)
    params = TemplateParams(rays=args.rays, nodes_per_ray=args.nodes,
                            max_radius=args.radius, delta=args.delta,
                            seed_region_radius=args.seed_region)
    res = segment(img, args.seed, params, helpers=args.helper)
    save_mask(res.mask, args.out_mask)
    if args.out_contour:
        with open(args.out_contour, "w") as f:
            for x, y in res.contour:
                f.write(f"{float(x)!r} {float(y)!r}\n")
    print(json.dumps({
        "cut_cost": res.cut_cost,
        "collapsed": res.collapsed,
        "pixels": int(res.mask.sum()),
        "elapsed_us": res.elapsed_us,
    }))
    return 0


def _cmd_eval(args) -> int:
    stats = run_batch(args.manifest, args.report, parallel=args.parallel)
    for name, s in stats.items():
        print(f"{name}: min={s.min:.4f} max={s.max:.4f} "
              f"mean={s.mean:.4f} std={s.std:.4f}")
    return 0


def _cmd_phantom(args) -> int:
    kwargs = dict(size=args.size, background_gray=args.bg, pattern=args.pattern,
                  contrast=args.contrast, speckle_sigma=args.sigma,
                  rng_seed=args.rng, halo_width=args.halo_width,
                  halo_depth=args.halo_depth, center=args.center)
    if args.lesion_radius is not None:
        kwargs["radius"] = args.lesion_radius
    img, gt = generate_phantom(PhantomSpec(**kwargs))
    save_gray_image(img, args.out_image)
    save_mask(gt, args.out_gt)
    print(json.dumps({"size": args.size, "lesion_pixels": int(np.sum(gt))}))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    app = create_app(ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"segment": _cmd_segment, "eval": _cmd_eval,
                "phantom": _cmd_phantom, "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
