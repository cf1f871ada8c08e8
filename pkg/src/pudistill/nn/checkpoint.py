"""Model checkpoints: versioned binary, bitwise round-trip.

Layout: magic "PUDNET1", u32 format version, u32 header length, a UTF-8
JSON header carrying the model descriptor and parameter shapes, then every
parameter tensor as raw little-endian float64 in declaration order.
"""

import importlib
import json
import struct

import numpy as np

from ..errors import FormatError, ShapeError

MAGIC = b"PUDNET1"
VERSION = 1

_MODEL_TYPES = {}


def register_model_type(name, builder):
    """Register a ``builder(descriptor) -> model`` for checkpoint loading."""
    _MODEL_TYPES[name] = builder


def _builder_for(type_name):
    if type_name not in _MODEL_TYPES:
        # Models living outside nn register themselves on import.
        for module in ("pudistill.pu.classifier",):
            try:
                importlib.import_module(module)
            except ImportError:
                pass
    try:
        return _MODEL_TYPES[type_name]
    except KeyError:
        raise FormatError(f"unknown model type {type_name!r} in checkpoint") from None


def checkpoint_bytes(model):
    params = model.params()
    header = {
        "model": model.describe(),
        "param_shapes": [list(p.shape) for p in params],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    blob = [MAGIC, struct.pack("<II", VERSION, len(header_bytes)), header_bytes]
    for p in params:
        blob.append(np.ascontiguousarray(p.values, dtype="<f8").tobytes())
    return b"".join(blob)


def save_checkpoint(model, path):
    data = checkpoint_bytes(model)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def load_checkpoint_bytes(data):
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(
            f"bad checkpoint magic {data[:len(MAGIC)]!r}, expected {MAGIC!r}"
        )
    off = len(MAGIC)
    version, header_len = struct.unpack_from("<II", data, off)
    if version != VERSION:
        raise FormatError(f"unsupported checkpoint version {version}")
    off += 8
    header = json.loads(data[off : off + header_len].decode("utf-8"))
    off += header_len

    descriptor = header["model"]
    model = _builder_for(descriptor["type"])(descriptor)
    params = model.params()
    shapes = [tuple(s) for s in header["param_shapes"]]
    if len(shapes) != len(params):
        raise FormatError(
            f"checkpoint lists {len(shapes)} parameters, model has {len(params)}"
        )
    for p, shape in zip(params, shapes):
        if p.shape != shape:
            raise ShapeError(f"checkpoint parameter shape {shape} != model {p.shape}")
        n = int(np.prod(shape)) if shape else 1
        nbytes = n * 8
        if off + nbytes > len(data):
            raise FormatError("checkpoint truncated inside parameter payload")
        p.values = np.frombuffer(data[off : off + nbytes], dtype="<f8").reshape(shape).copy()
        p.grad = np.zeros_like(p.values)
        off += nbytes
    if off != len(data):
        raise FormatError(f"{len(data) - off} trailing bytes after parameters")
    return model


def load_checkpoint(path):
    with open(path, "rb") as fh:
        return load_checkpoint_bytes(fh.read())
