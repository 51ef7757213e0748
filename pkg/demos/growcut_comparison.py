"""Radial cut vs the GrowCut cellular automaton on the same phantom.

GrowCut needs strokes for both classes (here: a blob of foreground seeds in
the lesion and a background ring outside it), after which labeled cells
conquer their 8-neighbors whenever attack strength g(|gray difference|)
exceeds the defender's strength. The radial cut needs a single seed point.
"""

import time

import numpy as np

from uscut import PhantomSpec, TemplateParams, dice, generate_phantom, grow_cut, segment
from uscut.maxflow import warm_up

warm_up()
spec = PhantomSpec(size=192, background_gray=120, pattern="hypo", contrast=50,
                   radius=28, speckle_sigma=0.05, rng_seed=12)
img, gt = generate_phantom(spec)
cx = cy = (img.width - 1) // 2

# GrowCut initialization: foreground blob at the center, background ring
ys, xs = np.mgrid[0:img.height, 0:img.width]
d = np.hypot(xs - cx, ys - cy)
labels = np.zeros(img.pixels.shape, np.int8)
labels[d <= 6] = 1
labels[(d >= 50) & (d <= 53)] = 2

t0 = time.perf_counter()
gc_mask = grow_cut(img, seed_labels=labels)
gc_ms = (time.perf_counter() - t0) * 1000

res = segment(img, (cx, cy), TemplateParams())

print(f"growcut     : dice {dice(gc_mask, gt):.3f}  ({gc_ms:.0f} ms, "
      f"{int(labels.astype(bool).sum())} seed pixels)")
print(f"radial cut  : dice {dice(res.mask, gt) if res.mask.any() else 0.0:.3f}  "
      f"({res.elapsed_us / 1000:.1f} ms, 1 seed point)")
print("\ngrowcut profits from its strong initialization (a whole blob plus a"
      "\nbackground ring) and floods up to the gray-value transition, while"
      "\nthe radial cut runs from a single hovered point in real time.")
