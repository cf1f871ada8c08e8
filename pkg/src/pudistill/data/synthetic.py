"""Synthetic 2-D Gaussian mixtures for oracle-verifiable selection tests."""

import json
import struct

import numpy as np

from ..errors import CapacityError, FormatError, ParameterError
from ..nn.tensor import seeded_rng
from .types import LabeledSet

CACHE_MAGIC = b"PUDSYN1"
CACHE_VERSION = 1


def synth_generate(num_classes, per_class, separation, seed, std=1.0):
    """Gaussian blobs, class k centered on a circle of radius ``separation``.

    Points are stored as 1x1x2 raw-feature "pixels" (the set is built with
    the raw-feature flag, skipping the [0, 1] pixel clamp). Deterministic
    under the seed; separation 0 collapses every class onto one blob.
    """
    if num_classes < 2:
        raise ParameterError(f"need at least 2 classes, got {num_classes}")
    if separation < 0:
        raise ParameterError(f"separation must be >= 0, got {separation}")
    if per_class < 1:
        raise CapacityError("per_class must be >= 1; an empty set has no use")
    rng = seeded_rng(seed, "synthetic-gaussians")
    points = []
    labels = []
    for k in range(num_classes):
        angle = 2.0 * np.pi * k / num_classes
        center = separation * np.array([np.cos(angle), np.sin(angle)])
        points.append(center + std * rng.standard_normal((per_class, 2)))
        labels.append(np.full(per_class, k, dtype=np.int64))
    features = np.concatenate(points).reshape(-1, 1, 1, 2)
    return LabeledSet(
        features,
        np.concatenate(labels),
        num_classes,
        role="original",
        raw_features=True,
    )


def save_synthetic_cache(path, dataset, seed, separation, std=1.0):
    """Versioned binary cache: seed and parameters in the header."""
    header = {
        "seed": int(seed),
        "num_classes": dataset.num_classes,
        "count": len(dataset),
        "separation": float(separation),
        "std": float(std),
        "shape": list(dataset.images.shape),
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<II", CACHE_VERSION, len(header_bytes)))
        fh.write(header_bytes)
        fh.write(np.ascontiguousarray(dataset.images, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(dataset.labels, dtype="<i8").tobytes())


def load_synthetic_cache(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise FormatError(f"bad synthetic cache magic {data[:len(CACHE_MAGIC)]!r}")
    off = len(CACHE_MAGIC)
    version, header_len = struct.unpack_from("<II", data, off)
    if version != CACHE_VERSION:
        raise FormatError(f"unsupported synthetic cache version {version}")
    off += 8
    header = json.loads(data[off : off + header_len].decode("utf-8"))
    off += header_len
    shape = tuple(header["shape"])
    n_img = int(np.prod(shape)) * 8
    images = np.frombuffer(data[off : off + n_img], dtype="<f8").reshape(shape).copy()
    off += n_img
    labels = np.frombuffer(data[off : off + header["count"] * 8], dtype="<i8").copy()
    dataset = LabeledSet(images, labels, header["num_classes"], raw_features=True)
    return dataset, header
