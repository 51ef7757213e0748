"""GrowCut baseline: seeded cellular automaton segmentation.

Cells carry a label (unlabeled / foreground / background) and a strength in
[0, 1]. Per synchronous step, cell p is conquered by an 8-neighbor q when

    g(|C_p - C_q|) * strength_q > strength_p,    g(x) = 1 - x / 255

taking the strongest attack; equal attacks prefer a foreground conqueror,
then the first neighbor in fixed raster-offset order. Seeded cells start at
strength 1 and never change label. Strengths never decrease, so the
automaton reaches a fixed point (or stops at ``max_iters``).
"""

from __future__ import annotations

import numpy as np

from .image import GrayImage

__all__ = ["grow_cut", "UNLABELED", "FOREGROUND", "BACKGROUND"]

UNLABELED, FOREGROUND, BACKGROUND = 0, 1, 2

_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _seed_arrays(shape, fg_seeds, bg_seeds, seed_labels):
    labels = np.zeros(shape, dtype=np.int8)
    if seed_labels is not None:
        lab = np.asarray(seed_labels)
        if lab.shape != shape:
            raise ValueError("seed label image does not match the image size")
        labels[lab == 1] = FOREGROUND
        labels[lab == 2] = BACKGROUND
    for pts, value in ((fg_seeds, FOREGROUND), (bg_seeds, BACKGROUND)):
        for p in pts or ():
            x, y = int(p[0]), int(p[1])
            if not (0 <= x < shape[1] and 0 <= y < shape[0]):
                raise ValueError(f"seed ({x}, {y}) outside the image")
            labels[y, x] = value
    if not (labels == FOREGROUND).any() or not (labels == BACKGROUND).any():
        raise ValueError("need at least one foreground and one background seed")
    return labels


def grow_cut(img: GrayImage | np.ndarray, fg_seeds=None, bg_seeds=None, *,
             seed_labels=None, max_iters: int = 500) -> np.ndarray:
    """Run the automaton and return the foreground mask.

    Seeds come either as (x, y) point lists or as a label image
    (0 none, 1 foreground, 2 background); both may be combined.
    """
    gray = (img.pixels if isinstance(img, GrayImage) else np.asarray(img)).astype(np.float64)
    h, w = gray.shape
    labels = _seed_arrays((h, w), fg_seeds, bg_seeds, seed_labels)
    strength = (labels != UNLABELED).astype(np.float64)
    seeded = labels != UNLABELED

    # padded buffers; the border has strength 0 and can never attack
    g_pad = np.zeros((h + 2, w + 2))
    g_pad[1:-1, 1:-1] = gray

    for _ in range(max_iters):
        lab_pad = np.zeros((h + 2, w + 2), dtype=np.int8)
        str_pad = np.zeros((h + 2, w + 2))
        lab_pad[1:-1, 1:-1] = labels
        str_pad[1:-1, 1:-1] = strength

        best_attack = np.zeros((h, w))
        best_label = np.zeros((h, w), dtype=np.int8)
        for dy, dx in _OFFSETS:
            q_gray = g_pad[1 + dy:h + 1 + dy, 1 + dx:w + 1 + dx]
            q_str = str_pad[1 + dy:h + 1 + dy, 1 + dx:w + 1 + dx]
            q_lab = lab_pad[1 + dy:h + 1 + dy, 1 + dx:w + 1 + dx]
            attack = (1.0 - np.abs(gray - q_gray) / 255.0) * q_str
            take = (attack > best_attack) | (
                (attack == best_attack) & (best_label == BACKGROUND) & (q_lab == FOREGROUND))
            best_attack = np.where(take, attack, best_attack)
            best_label = np.where(take, q_lab, best_label)

        conquered = (best_attack > strength) & ~seeded
        if not conquered.any():
            break
        strength = np.where(conquered, best_attack, strength)
        labels = np.where(conquered, best_label, labels)

    return labels == FOREGROUND
