"""How the delta parameter trades smoothness against flexibility.

delta bounds how far the boundary index may jump between adjacent rays.
With delta = 0 the contour is forced onto a single ring (a sampled circle
whose radius the gray values choose); raising delta lets the contour adapt
to irregular shapes, and the optimal cut cost can only go down since every
delta-smooth boundary stays feasible for delta + 1.
"""

import numpy as np

from uscut import PhantomSpec, TemplateParams, generate_phantom, segment

# an elliptic lesion: a circle-constrained contour cannot follow it
spec = PhantomSpec(size=256, background_gray=120, pattern="hypo", contrast=50,
                   axes=(45, 25), speckle_sigma=0.08, rng_seed=3)
img, gt = generate_phantom(spec)
seed = ((img.width - 1) / 2, (img.height - 1) / 2)

print("delta  cut cost   boundary ring span   contour radii (px)")
for delta in range(6):
    res = segment(img, seed, TemplateParams(delta=delta))
    radii = np.hypot(res.contour[:, 0] - seed[0], res.contour[:, 1] - seed[1])
    span = res.boundary.max() - res.boundary.min()
    print(f"  {delta}    {res.cut_cost:9.2f}   {span:^18d}   "
          f"{radii.min():5.1f} .. {radii.max():5.1f}")

print("\ndelta = 0 keeps every ray on one ring (radius span 0); larger deltas"
      "\nfree the contour and the cut cost decreases monotonically.")
