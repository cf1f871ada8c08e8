"""Ordered layer stacks with optional tap points for multi-scale features."""

from ..errors import ShapeError
from .layers import layer_from_descriptor


class Network:
    """A feed-forward stack. ``tap_points`` are layer indices whose outputs
    are also returned by :meth:`forward_with_taps` (strictly increasing)."""

    model_type = "network"

    def __init__(self, layers, tap_points=()):
        taps = list(tap_points)
        if any(b <= a for a, b in zip(taps, taps[1:])):
            raise ShapeError(f"tap points must be strictly increasing, got {taps}")
        if taps and (taps[0] < 0 or taps[-1] >= len(layers)):
            raise ShapeError(f"tap point out of range for {len(layers)} layers")
        self.layers = list(layers)
        self.tap_points = taps

    def params(self):
        out = []
        for layer in self.layers:
            out.extend(layer.params())
        return out

    def zero_grad(self):
        for layer in self.layers:
            layer.zero_grad()

    def forward(self, x):
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def forward_with_taps(self, x):
        taps = []
        wanted = set(self.tap_points)
        for i, layer in enumerate(self.layers):
            x = layer.forward(x)
            if i in wanted:
                taps.append(x)
        return x, taps

    def backward(self, dy):
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return dy

    def backward_from_taps(self, tap_grads, dy=None):
        """Backward pass when tap outputs received gradients of their own.

        ``dy`` is the gradient at the stack output and may be None when
        the output is only consumed through its taps; tap gradients are
        injected as the reverse pass crosses each tap index. Layers whose
        output feeds nothing are skipped (their parameters see no grad).
        """
        by_index = dict(zip(self.tap_points, tap_grads))
        grad = dy
        for i in reversed(range(len(self.layers))):
            injected = by_index.get(i)
            if injected is not None:
                grad = injected if grad is None else grad + injected
            if grad is None:
                continue
            grad = self.layers[i].backward(grad)
        return grad

    def check_finite(self):
        for p in self.params():
            p.check_finite("network parameter")

    def describe(self):
        return {
            "type": self.model_type,
            "layers": [layer.descriptor() for layer in self.layers],
            "tap_points": list(self.tap_points),
        }

    @classmethod
    def from_descriptor(cls, d):
        layers = [layer_from_descriptor(ld) for ld in d["layers"]]
        return cls(layers, d.get("tap_points", ()))
