"""Dataset containers.

Sets are immutable after construction and numpy-backed: images live in one
(N, H, W, C) float64 block, labels in an int64 vector. ``UnlabeledPool``
keeps any ground-truth labels in a private sealed attribute that only the
evaluation helpers read; training code sees unlabeled examples only.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import BoundsError, ShapeError


@dataclass(frozen=True)
class Example:
    """One image (H, W, C in [0, 1] unless raw features) plus optional label."""

    pixels: np.ndarray
    label: int | None = None


def _check_images(images, raw_features):
    images = np.ascontiguousarray(images, dtype=np.float64)
    if images.ndim != 4:
        raise ShapeError(f"images must be (N, H, W, C), got {images.shape}")
    if not np.all(np.isfinite(images)):
        raise ShapeError("images contain non-finite values")
    if not raw_features and (images.min() < 0.0 or images.max() > 1.0):
        raise ShapeError("pixel values outside [0, 1]; pass raw_features=True for feature grids")
    return images


class LabeledSet:
    """Fully labeled examples with a role tag: original, tiny or extended."""

    def __init__(self, images, labels, num_classes, role="original", raw_features=False):
        self.images = _check_images(images, raw_features)
        self.labels = np.ascontiguousarray(labels, dtype=np.int64)
        if self.labels.shape != (self.images.shape[0],):
            raise ShapeError(
                f"labels shape {self.labels.shape} does not match {self.images.shape[0]} images"
            )
        if num_classes < 1:
            raise ShapeError(f"num_classes must be >= 1, got {num_classes}")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= num_classes):
            raise ShapeError(f"labels outside [0, {num_classes})")
        self.num_classes = int(num_classes)
        self.role = role
        self.raw_features = bool(raw_features)

    def __len__(self):
        return self.images.shape[0]

    def __getitem__(self, i):
        return Example(self.images[i], int(self.labels[i]))

    @property
    def geometry(self):
        return self.images.shape[1:]

    def subset(self, indices, role=None):
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= len(self)):
            raise BoundsError("subset index out of range")
        return LabeledSet(
            self.images[indices],
            self.labels[indices],
            self.num_classes,
            role=role or self.role,
            raw_features=self.raw_features,
        )

    def class_indices(self, k):
        return np.nonzero(self.labels == k)[0]


class UnlabeledPool:
    """Examples whose labels are hidden from training code.

    ``sealed_labels``, when given, are ground truth reserved for
    evaluation reports; they are stored under a private name and no public
    accessor exists. ``pudistill.data.evaluation`` is the one reader.
    """

    def __init__(self, images, sealed_labels=None, raw_features=False):
        self.images = _check_images(images, raw_features)
        self.raw_features = bool(raw_features)
        if sealed_labels is not None:
            sealed_labels = np.ascontiguousarray(sealed_labels, dtype=np.int64)
            if sealed_labels.shape != (self.images.shape[0],):
                raise ShapeError("sealed labels do not match pool size")
        self._sealed_labels = sealed_labels

    def __len__(self):
        return self.images.shape[0]

    def __getitem__(self, i):
        return Example(self.images[i], None)

    @property
    def geometry(self):
        return self.images.shape[1:]

    def has_sealed_labels(self):
        return self._sealed_labels is not None


class PUSplit:
    """Tiny positive set, unlabeled pool and the configured class prior."""

    def __init__(self, positives, pool, class_prior):
        if not 0.0 < class_prior <= 1.0:
            raise ShapeError(f"class_prior must be in (0, 1], got {class_prior}")
        if len(positives) == 0:
            raise ShapeError("positive set may not be empty")
        self.positives = positives
        self.pool = pool
        self.class_prior = float(class_prior)


class ExtendedSet:
    """The tiny labeled set unified with selected pool examples.

    Pool members carry no class label yet (``hard_labels`` is -1 there);
    their categories are assigned later from teacher soft targets.
    """

    def __init__(self, images, hard_labels, num_classes, n_tiny):
        self.images = _check_images(images, raw_features=True)
        self.hard_labels = np.ascontiguousarray(hard_labels, dtype=np.int64)
        if self.hard_labels.shape != (self.images.shape[0],):
            raise ShapeError("hard_labels do not match images")
        self.num_classes = int(num_classes)
        self.n_tiny = int(n_tiny)

    def __len__(self):
        return self.images.shape[0]

    @property
    def n_selected(self):
        return len(self) - self.n_tiny


def crop_or_pad(images, target_hw):
    """Center-crop or zero-pad NHWC images to the target (H, W)."""
    n, h, w, c = images.shape
    th, tw = target_hw
    out = np.zeros((n, th, tw, c), dtype=images.dtype)
    sh, th0 = _crop_offsets(h, th)
    sw, tw0 = _crop_offsets(w, tw)
    ch, cw = min(h, th), min(w, tw)
    out[:, th0 : th0 + ch, tw0 : tw0 + cw] = images[:, sh : sh + ch, sw : sw + cw]
    return out


def _crop_offsets(src, dst):
    if src >= dst:
        return (src - dst) // 2, 0
    return 0, (dst - src) // 2
