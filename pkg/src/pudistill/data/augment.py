"""Training-time augmentation: random flip plus zero-padded random crop.

Off by default and left off for digit-style data, where mirroring changes
the class semantics.
"""

import numpy as np


def augment_batch(images, rng, pad=2, flip=True):
    n, h, w, c = images.shape
    out = images
    if flip:
        mask = rng.random(n) < 0.5
        out = out.copy()
        out[mask] = out[mask, :, ::-1]
    padded = np.zeros((n, h + 2 * pad, w + 2 * pad, c), dtype=out.dtype)
    padded[:, pad : pad + h, pad : pad + w] = out
    offsets = rng.integers(0, 2 * pad + 1, size=(n, 2))
    cropped = np.empty_like(images)
    for i in range(n):
        oy, ox = offsets[i]
        cropped[i] = padded[i, oy : oy + h, ox : ox + w]
    return cropped
