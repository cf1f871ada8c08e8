"""Teacher soft targets and their on-disk cache.

The teacher's logits are softened by softmax at temperature T; the
category of an example is the argmax of its soft target (lowest index on
exact ties). Targets are computed once up front and cached since the
teacher never changes during distillation.
"""

import struct

import numpy as np

from ..errors import FormatError, ParameterError
from ..nn.functional import softmax_temperature

CACHE_MAGIC = b"PUDSTG1"
CACHE_VERSION = 1


def teacher_soft_targets(teacher, images, temperature=1.0, batch_size=256):
    """(probs (N, K), categories (N,)) for a frozen teacher over images."""
    if temperature <= 0:
        raise ParameterError(f"temperature must be > 0, got {temperature}")
    probs = []
    for i in range(0, images.shape[0], batch_size):
        logits = teacher.forward(images[i : i + batch_size])
        probs.append(softmax_temperature(logits, temperature))
    probs = np.concatenate(probs) if probs else np.zeros((0, 0))
    categories = probs.argmax(axis=1).astype(np.int64)
    return probs, categories


def save_soft_target_cache(path, probs, categories):
    """Record-per-example binary: u64 example id, K f64 probs, u32 category."""
    n, k = probs.shape
    rec = np.dtype([("id", "<u8"), ("probs", "<f8", (k,)), ("category", "<u4")])
    records = np.zeros(n, dtype=rec)
    records["id"] = np.arange(n, dtype=np.uint64)
    records["probs"] = probs
    records["category"] = categories
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<III", CACHE_VERSION, n, k))
        fh.write(records.tobytes())


def load_soft_target_cache(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise FormatError(f"bad soft-target cache magic {data[:len(CACHE_MAGIC)]!r}")
    version, n, k = struct.unpack_from("<III", data, len(CACHE_MAGIC))
    if version != CACHE_VERSION:
        raise FormatError(f"unsupported soft-target cache version {version}")
    rec = np.dtype([("id", "<u8"), ("probs", "<f8", (k,)), ("category", "<u4")])
    payload = data[len(CACHE_MAGIC) + 12 :]
    if len(payload) != n * rec.itemsize:
        raise FormatError("soft-target cache payload size mismatch")
    records = np.frombuffer(payload, dtype=rec)
    if not np.array_equal(records["id"], np.arange(n, dtype=np.uint64)):
        raise FormatError("soft-target cache ids are not contiguous")
    return records["probs"].copy(), records["category"].astype(np.int64)
