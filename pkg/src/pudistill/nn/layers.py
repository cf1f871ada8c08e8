"""The fixed layer menu: forward/backward pairs with explicit caches.

There is no general autodiff here. Each layer caches what its own backward
pass needs, accumulates parameter gradients in place, and returns the
gradient with respect to its input. Convolution is stride-1 "valid" only
and accumulates in (ki, kj, cin) order per output element, so a naive
nested-loop oracle with the same ordering reproduces it bit for bit.
"""

import numpy as np

from ..errors import ParameterError, ShapeError
from .functional import sigmoid, softmax_temperature
from .tensor import Tensor, uniform_fan_init


class Layer:
    """Base class; subclasses define forward/backward and a descriptor."""

    kind = "base"

    def params(self):
        return []

    def zero_grad(self):
        for p in self.params():
            p.zero_grad()

    def forward(self, x):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError


class Dense(Layer):
    kind = "dense"

    def __init__(self, in_dim, out_dim, rng=None):
        if in_dim < 1 or out_dim < 1:
            raise ShapeError(f"dense extents must be positive, got {in_dim}x{out_dim}")
        self.in_dim = in_dim
        self.out_dim = out_dim
        if rng is None:
            w = np.zeros((in_dim, out_dim))
        else:
            w = uniform_fan_init(rng, (in_dim, out_dim), in_dim, out_dim)
        self.weight = Tensor(w)
        self.bias = Tensor(np.zeros(out_dim))
        self._x = None

    def params(self):
        return [self.weight, self.bias]

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ShapeError(f"dense expects (N, {self.in_dim}), got {x.shape}")
        self._x = x
        return x @ self.weight.values + self.bias.values

    def backward(self, dy):
        x = self._x
        self.weight.grad += x.T @ dy
        self.bias.grad += dy.sum(axis=0)
        return dy @ self.weight.values.T

    def descriptor(self):
        return {"kind": self.kind, "in_dim": self.in_dim, "out_dim": self.out_dim}

    @classmethod
    def from_descriptor(cls, d):
        return cls(d["in_dim"], d["out_dim"])


class Conv2d(Layer):
    """Stride-1 valid-padding convolution over NHWC maps.

    The forward pass starts each output element from its bias and then
    accumulates one fused multiply-add per (ki, kj, cin) step, in that
    order. Keeping the accumulation order fixed is what lets the
    quadruple-loop reference in the tests match exactly, and it also keeps
    results independent of BLAS threading.
    """

    kind = "conv2d"

    def __init__(self, kh, kw, in_channels, out_channels, rng=None):
        if kh < 1 or kw < 1 or in_channels < 1 or out_channels < 1:
            raise ShapeError("conv extents must be positive")
        self.kh = kh
        self.kw = kw
        self.in_channels = in_channels
        self.out_channels = out_channels
        shape = (kh, kw, in_channels, out_channels)
        if rng is None:
            k = np.zeros(shape)
        else:
            fan_in = kh * kw * in_channels
            fan_out = kh * kw * out_channels
            k = uniform_fan_init(rng, shape, fan_in, fan_out)
        self.kernels = Tensor(k)
        self.bias = Tensor(np.zeros(out_channels))
        self._x = None

    def params(self):
        return [self.kernels, self.bias]

    def forward(self, x):
        if x.ndim != 4 or x.shape[3] != self.in_channels:
            raise ShapeError(
                f"conv expects (N, H, W, {self.in_channels}), got {x.shape}"
            )
        n, h, w, _ = x.shape
        ho, wo = h - self.kh + 1, w - self.kw + 1
        if ho < 1 or wo < 1:
            raise ShapeError(f"input {h}x{w} smaller than kernel {self.kh}x{self.kw}")
        self._x = x
        k = self.kernels.values
        out = np.broadcast_to(self.bias.values, (n, ho, wo, self.out_channels)).copy()
        for ki in range(self.kh):
            for kj in range(self.kw):
                for c in range(self.in_channels):
                    out += x[:, ki : ki + ho, kj : kj + wo, c, None] * k[ki, kj, c]
        return out

    def backward(self, dy):
        x = self._x
        n, h, w, _ = x.shape
        ho, wo = dy.shape[1], dy.shape[2]
        self.bias.grad += dy.sum(axis=(0, 1, 2))
        k = self.kernels.values
        dx = np.zeros_like(x)
        for ki in range(self.kh):
            for kj in range(self.kw):
                for c in range(self.in_channels):
                    patch = x[:, ki : ki + ho, kj : kj + wo, c]
                    self.kernels.grad[ki, kj, c] += np.einsum(
                        "nij,nijk->k", patch, dy, optimize=False
                    )
                    dx[:, ki : ki + ho, kj : kj + wo, c] += dy @ k[ki, kj, c]
        return dx

    def descriptor(self):
        return {
            "kind": self.kind,
            "kh": self.kh,
            "kw": self.kw,
            "in_channels": self.in_channels,
            "out_channels": self.out_channels,
        }

    @classmethod
    def from_descriptor(cls, d):
        return cls(d["kh"], d["kw"], d["in_channels"], d["out_channels"])


class ReLU(Layer):
    kind = "relu"

    def __init__(self):
        self._mask = None

    def forward(self, x):
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, dy):
        return np.where(self._mask, dy, 0.0)

    def descriptor(self):
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d):
        return cls()


class Sigmoid(Layer):
    kind = "sigmoid"

    def __init__(self):
        self._y = None

    def forward(self, x):
        self._y = sigmoid(x)
        return self._y

    def backward(self, dy):
        y = self._y
        return dy * y * (1.0 - y)

    def descriptor(self):
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d):
        return cls()


class MaxPool2x2(Layer):
    """2x2 max pooling with stride 2; ties route to the first window slot."""

    kind = "maxpool2x2"

    def __init__(self):
        self._argmax = None
        self._in_shape = None

    def forward(self, x):
        n, h, w, c = x.shape
        if h % 2 or w % 2:
            raise ShapeError(f"maxpool2x2 needs even spatial extents, got {h}x{w}")
        windows = x.reshape(n, h // 2, 2, w // 2, 2, c)
        flat = windows.transpose(0, 1, 3, 5, 2, 4).reshape(n, h // 2, w // 2, c, 4)
        self._argmax = flat.argmax(axis=-1)
        self._in_shape = x.shape
        return np.take_along_axis(flat, self._argmax[..., None], axis=-1)[..., 0]

    def backward(self, dy):
        n, h, w, c = self._in_shape
        flat = np.zeros((n, h // 2, w // 2, c, 4))
        np.put_along_axis(flat, self._argmax[..., None], dy[..., None], axis=-1)
        windows = flat.reshape(n, h // 2, w // 2, c, 2, 2).transpose(0, 1, 4, 2, 5, 3)
        return windows.reshape(n, h, w, c)

    def descriptor(self):
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d):
        return cls()


class GlobalAvgPool(Layer):
    """Compress an NHWC map to per-channel spatial means."""

    kind = "global_avg_pool"

    def __init__(self):
        self._in_shape = None

    def forward(self, x):
        if x.ndim != 4:
            raise ShapeError(f"global_avg_pool expects NHWC, got shape {x.shape}")
        n, h, w, c = x.shape
        if h < 1 or w < 1:
            raise ShapeError("global_avg_pool: empty spatial extent")
        self._in_shape = x.shape
        return x.sum(axis=(1, 2)) / float(h * w)

    def backward(self, dy):
        n, h, w, c = self._in_shape
        scale = 1.0 / float(h * w)
        return np.broadcast_to(dy[:, None, None, :] * scale, self._in_shape).copy()

    def descriptor(self):
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d):
        return cls()


class Flatten(Layer):
    kind = "flatten"

    def __init__(self):
        self._in_shape = None

    def forward(self, x):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return dy.reshape(self._in_shape)

    def descriptor(self):
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d):
        return cls()


class SoftmaxT(Layer):
    """Row-wise softmax with a fixed temperature."""

    kind = "softmax_t"

    def __init__(self, temperature=1.0):
        if temperature <= 0:
            raise ParameterError(f"temperature must be > 0, got {temperature}")
        self.temperature = float(temperature)
        self._y = None

    def forward(self, x):
        self._y = softmax_temperature(x, self.temperature)
        return self._y

    def backward(self, dy):
        y = self._y
        inner = (dy * y).sum(axis=-1, keepdims=True)
        return y * (dy - inner) / self.temperature

    def descriptor(self):
        return {"kind": self.kind, "temperature": self.temperature}

    @classmethod
    def from_descriptor(cls, d):
        return cls(d["temperature"])


class AttentionGate(Layer):
    """Bottlenecked two-layer gate that re-scales descriptor channels.

    gate = sigmoid(relu(o @ W1 + b1) @ W2 + b2), output = gate * o.
    The bottleneck width is channels / ratio; the ratio must divide the
    channel count. Biases start at zero so a zero descriptor maps to
    gates of exactly 0.5.
    """

    kind = "attention_gate"

    def __init__(self, channels, ratio, rng=None):
        if ratio < 1 or channels % ratio != 0:
            raise ParameterError(
                f"bottleneck ratio {ratio} must divide channel count {channels}"
            )
        self.channels = channels
        self.ratio = ratio
        mid = channels // ratio
        if rng is None:
            w1 = np.zeros((channels, mid))
            w2 = np.zeros((mid, channels))
        else:
            w1 = uniform_fan_init(rng, (channels, mid), channels, mid)
            w2 = uniform_fan_init(rng, (mid, channels), mid, channels)
        self.w1 = Tensor(w1)
        self.b1 = Tensor(np.zeros(mid))
        self.w2 = Tensor(w2)
        self.b2 = Tensor(np.zeros(channels))
        self._cache = None

    def params(self):
        return [self.w1, self.b1, self.w2, self.b2]

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.channels:
            raise ShapeError(
                f"attention gate expects (N, {self.channels}), got {x.shape}"
            )
        z1 = x @ self.w1.values + self.b1.values
        h = np.where(z1 > 0, z1, 0.0)
        gate = sigmoid(h @ self.w2.values + self.b2.values)
        self._cache = (x, z1, h, gate)
        return gate * x

    def backward(self, dy):
        x, z1, h, gate = self._cache
        dgate = dy * x
        dx = dy * gate
        dz2 = dgate * gate * (1.0 - gate)
        self.w2.grad += h.T @ dz2
        self.b2.grad += dz2.sum(axis=0)
        dh = dz2 @ self.w2.values.T
        dz1 = np.where(z1 > 0, dh, 0.0)
        self.w1.grad += x.T @ dz1
        self.b1.grad += dz1.sum(axis=0)
        dx += dz1 @ self.w1.values.T
        return dx

    def gate_values(self, x):
        """Gate activations alone; strictly inside (0, 1) for finite input."""
        z1 = x @ self.w1.values + self.b1.values
        h = np.where(z1 > 0, z1, 0.0)
        return sigmoid(h @ self.w2.values + self.b2.values)

    def descriptor(self):
        return {"kind": self.kind, "channels": self.channels, "ratio": self.ratio}

    @classmethod
    def from_descriptor(cls, d):
        return cls(d["channels"], d["ratio"])


_LAYER_KINDS = {
    cls.kind: cls
    for cls in (
        Dense,
        Conv2d,
        ReLU,
        Sigmoid,
        MaxPool2x2,
        GlobalAvgPool,
        Flatten,
        SoftmaxT,
        AttentionGate,
    )
}


def layer_from_descriptor(d):
    try:
        cls = _LAYER_KINDS[d["kind"]]
    except KeyError:
        raise ShapeError(f"unknown layer kind {d.get('kind')!r}") from None
    return cls.from_descriptor(d)
