"""Procedural digit and letter glyphs rendered to IDX files.

Keeps end-to-end experiments self-contained: no corpus downloads. Each
glyph is a set of polyline strokes in a unit box; a sample is rendered by
jittering stroke endpoints, rasterizing an anti-aliased distance field,
then applying a random affine warp, blur and pixel noise. Digits play the
role of the original 10-class dataset; letters are the out-of-concept
contamination for unlabeled pools (several of them deliberately resemble
digits, which is what makes selection non-trivial).
"""

import json
import os

import numpy as np
from scipy import ndimage

from ..nn.tensor import seeded_rng
from .idx import save_idx


def _arc(cx, cy, rx, ry, deg0, deg1, n=12):
    t = np.radians(np.linspace(deg0, deg1, n))
    return list(zip(cx + rx * np.cos(t), cy + ry * np.sin(t)))


def _line(*pts):
    return list(pts)


# Unit box, x right, y down.
GLYPH_DIGITS = {
    "0": [_arc(0.5, 0.5, 0.3, 0.4, 0, 360, 16)],
    "1": [_line((0.34, 0.26), (0.54, 0.08), (0.54, 0.92)), _line((0.36, 0.92), (0.72, 0.92))],
    "2": [_arc(0.5, 0.3, 0.28, 0.21, 180, 372), _line((0.76, 0.37), (0.24, 0.92), (0.78, 0.92))],
    "3": [_arc(0.48, 0.3, 0.26, 0.2, 190, 440), _arc(0.48, 0.7, 0.28, 0.21, 280, 530)],
    "4": [_line((0.62, 0.08), (0.2, 0.6), (0.82, 0.6)), _line((0.62, 0.3), (0.62, 0.92))],
    "5": [_line((0.74, 0.08), (0.3, 0.08), (0.27, 0.45)), _arc(0.48, 0.66, 0.27, 0.25, 250, 430)],
    "6": [_line((0.66, 0.1), (0.42, 0.32), (0.3, 0.58)), _arc(0.5, 0.66, 0.24, 0.25, 0, 360, 14)],
    "7": [_line((0.22, 0.1), (0.78, 0.1), (0.42, 0.92))],
    "8": [_arc(0.5, 0.29, 0.23, 0.2, 0, 360, 14), _arc(0.5, 0.71, 0.27, 0.21, 0, 360, 14)],
    "9": [_arc(0.48, 0.33, 0.24, 0.24, 0, 360, 14), _line((0.72, 0.36), (0.7, 0.62), (0.56, 0.92))],
}

GLYPH_LETTERS = {
    "A": [_line((0.2, 0.92), (0.5, 0.08), (0.8, 0.92)), _line((0.32, 0.62), (0.68, 0.62))],
    "B": [
        _line((0.26, 0.08), (0.26, 0.92)),
        _arc(0.26, 0.29, 0.32, 0.21, -90, 90),
        _arc(0.26, 0.71, 0.36, 0.21, -90, 90),
    ],
    "C": [_arc(0.52, 0.5, 0.3, 0.42, 55, 305)],
    "D": [_line((0.26, 0.08), (0.26, 0.92)), _arc(0.26, 0.5, 0.44, 0.42, -90, 90)],
    "E": [_line((0.7, 0.08), (0.26, 0.08), (0.26, 0.92), (0.7, 0.92)), _line((0.26, 0.5), (0.6, 0.5))],
    "F": [_line((0.7, 0.08), (0.26, 0.08), (0.26, 0.92)), _line((0.26, 0.5), (0.6, 0.5))],
    "G": [_arc(0.5, 0.5, 0.3, 0.42, 55, 320), _line((0.52, 0.55), (0.8, 0.55), (0.8, 0.78))],
    "H": [_line((0.25, 0.08), (0.25, 0.92)), _line((0.75, 0.08), (0.75, 0.92)), _line((0.25, 0.5), (0.75, 0.5))],
    "I": [_line((0.36, 0.08), (0.64, 0.08)), _line((0.5, 0.08), (0.5, 0.92)), _line((0.36, 0.92), (0.64, 0.92))],
    "J": [_line((0.4, 0.08), (0.72, 0.08)), _line((0.62, 0.08), (0.62, 0.7)), _arc(0.45, 0.7, 0.17, 0.2, 0, 180)],
    "K": [_line((0.26, 0.08), (0.26, 0.92)), _line((0.72, 0.08), (0.26, 0.55)), _line((0.42, 0.44), (0.76, 0.92))],
    "L": [_line((0.3, 0.08), (0.3, 0.92), (0.74, 0.92))],
    "M": [_line((0.18, 0.92), (0.2, 0.08), (0.5, 0.56), (0.8, 0.08), (0.82, 0.92))],
    "N": [_line((0.25, 0.92), (0.25, 0.08), (0.75, 0.92), (0.75, 0.08))],
    "O": [_arc(0.5, 0.5, 0.32, 0.42, 0, 360, 16)],
    "P": [_line((0.26, 0.08), (0.26, 0.92)), _arc(0.26, 0.3, 0.34, 0.22, -90, 90)],
    "Q": [_arc(0.5, 0.48, 0.3, 0.4, 0, 360, 16), _line((0.58, 0.66), (0.82, 0.95))],
    "R": [_line((0.26, 0.08), (0.26, 0.92)), _arc(0.26, 0.3, 0.34, 0.22, -90, 90), _line((0.4, 0.52), (0.76, 0.92))],
    "S": [_arc(0.5, 0.29, 0.26, 0.21, -60, 185), _arc(0.5, 0.71, 0.26, 0.21, 125, 372)],
    "T": [_line((0.2, 0.08), (0.8, 0.08)), _line((0.5, 0.08), (0.5, 0.92))],
    "U": [_line((0.25, 0.08), (0.25, 0.62)), _arc(0.5, 0.62, 0.25, 0.28, 180, 0), _line((0.75, 0.62), (0.75, 0.08))],
    "V": [_line((0.2, 0.08), (0.5, 0.92), (0.8, 0.08))],
    "W": [_line((0.14, 0.08), (0.32, 0.92), (0.5, 0.42), (0.68, 0.92), (0.86, 0.08))],
    "X": [_line((0.22, 0.08), (0.78, 0.92)), _line((0.78, 0.08), (0.22, 0.92))],
    "Y": [_line((0.2, 0.08), (0.5, 0.5), (0.8, 0.08)), _line((0.5, 0.5), (0.5, 0.92))],
    "Z": [_line((0.22, 0.08), (0.78, 0.08), (0.22, 0.92), (0.78, 0.92))],
}

_SIZE = 28
# Strokes occupy this box inside the canvas (pixel coords).
_BOX_X0, _BOX_X1 = 7.0, 21.0
_BOX_Y0, _BOX_Y1 = 4.0, 24.0


def _rasterize(strokes, jitter, thickness, rng):
    """Distance-field rasterization of jittered polyline strokes."""
    ys, xs = np.mgrid[0:_SIZE, 0:_SIZE]
    px = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(np.float64)
    field = np.zeros(_SIZE * _SIZE)
    for stroke in strokes:
        pts = np.asarray(stroke, dtype=np.float64)
        pts = pts + rng.normal(0.0, jitter, size=pts.shape)
        pts[:, 0] = _BOX_X0 + pts[:, 0] * (_BOX_X1 - _BOX_X0)
        pts[:, 1] = _BOX_Y0 + pts[:, 1] * (_BOX_Y1 - _BOX_Y0)
        for a, b in zip(pts[:-1], pts[1:]):
            ab = b - a
            denom = float(ab @ ab)
            if denom < 1e-12:
                t = np.zeros(px.shape[0])
            else:
                t = np.clip((px - a) @ ab / denom, 0.0, 1.0)
            closest = a + t[:, None] * ab
            d = np.sqrt(((px - closest) ** 2).sum(axis=1))
            np.maximum(field, np.clip(1.0 - (d - thickness) / 0.9, 0.0, 1.0), out=field)
    return field.reshape(_SIZE, _SIZE)


def _random_warp(img, rng):
    theta = rng.uniform(-0.21, 0.21)
    scale_x = np.exp(rng.uniform(-0.13, 0.13))
    scale_y = np.exp(rng.uniform(-0.13, 0.13))
    shear = rng.uniform(-0.16, 0.16)
    shift = rng.uniform(-1.6, 1.6, size=2)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    fwd = np.array(
        [
            [scale_x * cos_t, scale_x * (shear * cos_t - sin_t)],
            [scale_y * sin_t, scale_y * (shear * sin_t + cos_t)],
        ]
    )
    inv = np.linalg.inv(fwd)
    center = np.array([(_SIZE - 1) / 2.0, (_SIZE - 1) / 2.0])
    offset = center - inv @ (center + shift[::-1])
    # affine_transform works in (row, col) = (y, x); fwd is built in (x, y)
    inv_rc = inv[::-1, ::-1]
    offset_rc = offset[::-1]
    return ndimage.affine_transform(img, inv_rc, offset=offset_rc, order=1, mode="constant")


def render_glyph(strokes, rng):
    field = _rasterize(
        strokes,
        jitter=rng.uniform(0.008, 0.03),
        thickness=rng.uniform(0.85, 1.35),
        rng=rng,
    )
    img = _random_warp(field, rng)
    img = ndimage.gaussian_filter(img, sigma=rng.uniform(0.25, 0.6))
    img *= rng.uniform(0.85, 1.0)
    img += rng.normal(0.0, 0.035, size=img.shape)
    return np.clip(img, 0.0, 1.0)


def render_glyph_set(glyph_table, keys, count, seed, purpose="glyphs"):
    """Render ``count`` samples cycling uniformly over ``keys``.

    Returns (images float64 (N, 28, 28), class_indices int64 (N,)) where
    the class index is the position of the glyph key in ``keys``. Order is
    class-interleaved and deterministic under the seed.
    """
    rng = seeded_rng(seed, purpose)
    images = np.empty((count, _SIZE, _SIZE), dtype=np.float64)
    labels = np.empty(count, dtype=np.int64)
    for i in range(count):
        k = i % len(keys)
        images[i] = render_glyph(glyph_table[keys[k]], rng)
        labels[i] = k
    return images, labels


def write_glyph_corpus(out_dir, n_train, n_test, pool_size, pool_positive_fraction, seed):
    """Write a digit original set plus a digit/letter pool as IDX files.

    Layout under ``out_dir``: digits-{train,test}-{images,labels}.idx,
    pool-images.idx and pool-sealed.idx (label 1 marks a digit). A
    params.json sidecar records the generation arguments so callers can
    reuse a corpus instead of re-rendering it.
    """
    os.makedirs(out_dir, exist_ok=True)
    digit_keys = sorted(GLYPH_DIGITS)
    letter_keys = sorted(GLYPH_LETTERS)

    train_imgs, train_labels = render_glyph_set(GLYPH_DIGITS, digit_keys, n_train, seed, "glyph-train")
    test_imgs, test_labels = render_glyph_set(GLYPH_DIGITS, digit_keys, n_test, seed, "glyph-test")

    n_pos = int(round(pool_size * pool_positive_fraction))
    pos_imgs, _ = render_glyph_set(GLYPH_DIGITS, digit_keys, n_pos, seed, "glyph-pool-pos")
    neg_imgs, _ = render_glyph_set(GLYPH_LETTERS, letter_keys, pool_size - n_pos, seed, "glyph-pool-neg")
    pool_imgs = np.concatenate([pos_imgs, neg_imgs])
    sealed = np.concatenate(
        [np.ones(n_pos, dtype=np.int64), np.zeros(pool_size - n_pos, dtype=np.int64)]
    )
    order = seeded_rng(seed, "glyph-pool-shuffle").permutation(pool_size)
    pool_imgs = pool_imgs[order]
    sealed = sealed[order]

    save_idx(os.path.join(out_dir, "digits-train-images.idx"), "images", train_imgs)
    save_idx(os.path.join(out_dir, "digits-train-labels.idx"), "labels", train_labels)
    save_idx(os.path.join(out_dir, "digits-test-images.idx"), "images", test_imgs)
    save_idx(os.path.join(out_dir, "digits-test-labels.idx"), "labels", test_labels)
    save_idx(os.path.join(out_dir, "pool-images.idx"), "images", pool_imgs)
    save_idx(os.path.join(out_dir, "pool-sealed.idx"), "labels", sealed)
    params = {
        "n_train": n_train,
        "n_test": n_test,
        "pool_size": pool_size,
        "pool_positive_fraction": pool_positive_fraction,
        "seed": int(seed),
    }
    with open(os.path.join(out_dir, "params.json"), "w") as fh:
        json.dump(params, fh, sort_keys=True)
    return params
