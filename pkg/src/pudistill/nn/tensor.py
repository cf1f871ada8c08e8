"""Double-precision value grids with matching gradient buffers."""

import hashlib

import numpy as np

from ..errors import ShapeError


class Tensor:
    """A parameter array and its same-shape gradient accumulator.

    All arithmetic in this package is float64. Gradients are explicit
    zero-then-accumulate: callers zero before a backward pass and layers
    only ever ``+=`` into ``grad``.
    """

    def __init__(self, values):
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self.grad = np.zeros_like(self.values)

    @property
    def shape(self):
        return self.values.shape

    @property
    def size(self):
        return self.values.size

    def zero_grad(self):
        self.grad.fill(0.0)

    def check_finite(self, what="tensor"):
        if not np.all(np.isfinite(self.values)):
            raise ShapeError(f"{what}: non-finite values")
        if not np.all(np.isfinite(self.grad)):
            raise ShapeError(f"{what}: non-finite gradient")

    def __repr__(self):
        return f"Tensor(shape={self.values.shape})"


def uniform_fan_init(rng, shape, fan_in, fan_out):
    """Uniform init in +/- sqrt(6 / (fan_in + fan_out)), biases stay zero."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def seeded_rng(seed, purpose=""):
    """Independent, reproducible generator for one named purpose.

    The purpose string is folded into the seed so e.g. weight init and
    batch shuffling never share a stream.
    """
    if purpose:
        return np.random.default_rng(np.random.SeedSequence([int(seed), derive_seed(0, purpose)]))
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def derive_seed(seed, purpose):
    """Stable integer sub-seed for a named purpose."""
    digest = hashlib.sha256(f"{seed}:{purpose}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
