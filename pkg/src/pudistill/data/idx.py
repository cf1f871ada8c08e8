"""IDX file format (the MNIST/EMNIST distribution layout), bit-exact.

Image files: big-endian u32 magic 0x00000803, then three big-endian u32
dims (count, rows, cols), then unsigned bytes row-major. Label files:
magic 0x00000801, one dim (count), then one byte per label. Parsed images
are scaled by 1/255 into [0, 1]; serialization reverses the scaling, so
parse -> serialize reproduces a valid file byte for byte.
"""

import struct

import numpy as np

from ..errors import FormatError

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


def parse_idx(data):
    """Decode IDX bytes into ("images", float (N,H,W)) or ("labels", int (N,))."""
    if len(data) < 4:
        raise FormatError("file shorter than the 4-byte magic")
    (magic,) = struct.unpack_from(">I", data, 0)
    if magic == IMAGES_MAGIC:
        if len(data) < 16:
            raise FormatError("image header truncated before dimensions")
        n, rows, cols = struct.unpack_from(">III", data, 4)
        payload = data[16:]
        expected = n * rows * cols
        if len(payload) < expected:
            raise FormatError(
                f"image payload holds {len(payload)} bytes, header promises {expected}"
            )
        if len(payload) > expected:
            raise FormatError(f"{len(payload) - expected} trailing bytes after images")
        raw = np.frombuffer(payload, dtype=np.uint8).reshape(n, rows, cols)
        return "images", raw.astype(np.float64) / 255.0
    if magic == LABELS_MAGIC:
        if len(data) < 8:
            raise FormatError("label header truncated before count")
        (n,) = struct.unpack_from(">I", data, 4)
        payload = data[8:]
        if len(payload) < n:
            raise FormatError(f"label payload holds {len(payload)} bytes, header promises {n}")
        if len(payload) > n:
            raise FormatError(f"{len(payload) - n} trailing bytes after labels")
        return "labels", np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    raise FormatError(f"unrecognized IDX magic 0x{magic:08x}")


def serialize_idx(kind, array):
    """Encode images (values in [0, 1]) or labels back into IDX bytes."""
    if kind == "images":
        arr = np.asarray(array)
        if arr.ndim != 3:
            raise FormatError(f"images must be (N, rows, cols), got {arr.shape}")
        n, rows, cols = arr.shape
        raw = np.rint(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)
        return struct.pack(">IIII", IMAGES_MAGIC, n, rows, cols) + raw.tobytes()
    if kind == "labels":
        arr = np.asarray(array, dtype=np.int64)
        if arr.ndim != 1:
            raise FormatError(f"labels must be a vector, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise FormatError("labels outside the unsigned byte range")
        return struct.pack(">II", LABELS_MAGIC, arr.size) + arr.astype(np.uint8).tobytes()
    raise FormatError(f"unknown IDX kind {kind!r}")


def load_idx(path):
    with open(path, "rb") as fh:
        return parse_idx(fh.read())


def save_idx(path, kind, array):
    data = serialize_idx(kind, array)
    with open(path, "wb") as fh:
        fh.write(data)
    return data
