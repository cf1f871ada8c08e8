"""The PU discriminant: multi-scale descriptors, channel gating, scalar head.

Feature maps tapped at several backbone depths are compressed to channel
descriptors by global average pooling, concatenated, re-scaled by a
bottlenecked attention gate, and mapped to a single real score F(x) by a
dense head. The decision is sign(F(x)). The gate can be disabled, which
degrades the model to plain concatenated descriptors for comparisons.
"""

import numpy as np

from ..errors import ShapeError
from ..nn.checkpoint import register_model_type
from ..nn.layers import (
    AttentionGate,
    Conv2d,
    Dense,
    Flatten,
    GlobalAvgPool,
    MaxPool2x2,
    ReLU,
    layer_from_descriptor,
)
from ..nn.network import Network


class MultiScaleAttentionClassifier:
    model_type = "pu_classifier"

    def __init__(self, backbone, gate, head, descriptor_dims):
        self.backbone = backbone
        self.gate = gate
        self.head = head
        self.descriptor_dims = list(descriptor_dims)
        self._gaps = [GlobalAvgPool() for _ in backbone.tap_points]
        self._tap_was_map = None

    def params(self):
        out = list(self.backbone.params())
        if self.gate is not None:
            out.extend(self.gate.params())
        out.extend(self.head.params())
        return out

    def zero_grad(self):
        for p in self.params():
            p.zero_grad()

    def forward(self, x):
        """Scores F(x) for a batch, shape (N,)."""
        _, taps = self.backbone.forward_with_taps(x)
        descriptors = []
        self._tap_was_map = []
        for tap, gap in zip(taps, self._gaps):
            if tap.ndim == 4:
                descriptors.append(gap.forward(tap))
                self._tap_was_map.append(True)
            else:
                descriptors.append(tap)
                self._tap_was_map.append(False)
        o = np.concatenate(descriptors, axis=1)
        if o.shape[1] != sum(self.descriptor_dims):
            raise ShapeError(
                f"descriptor width {o.shape[1]} != declared {sum(self.descriptor_dims)}"
            )
        gated = self.gate.forward(o) if self.gate is not None else o
        return self.head.forward(gated)[:, 0]

    def backward(self, dscores):
        """Backpropagate d(loss)/d(F) through head, gate and backbone."""
        dgated = self.head.backward(np.asarray(dscores, dtype=np.float64)[:, None])
        do = self.gate.backward(dgated) if self.gate is not None else dgated
        tap_grads = []
        offset = 0
        for dim, was_map, gap in zip(self.descriptor_dims, self._tap_was_map, self._gaps):
            chunk = do[:, offset : offset + dim]
            tap_grads.append(gap.backward(chunk) if was_map else chunk)
            offset += dim
        self.backbone.backward_from_taps(tap_grads)

    def scores(self, images, batch_size=256):
        """Inference-only scores over a whole image block, batched."""
        parts = []
        for i in range(0, images.shape[0], batch_size):
            parts.append(self.forward(images[i : i + batch_size]))
        return np.concatenate(parts) if parts else np.zeros(0)

    def describe(self):
        return {
            "type": self.model_type,
            "backbone": self.backbone.describe(),
            "gate": None if self.gate is None else self.gate.descriptor(),
            "head": self.head.descriptor(),
            "descriptor_dims": list(self.descriptor_dims),
        }

    @classmethod
    def from_descriptor(cls, d):
        backbone = Network.from_descriptor(d["backbone"])
        gate = None if d["gate"] is None else layer_from_descriptor(d["gate"])
        head = layer_from_descriptor(d["head"])
        return cls(backbone, gate, head, d["descriptor_dims"])


def build_pu_classifier(
    geometry,
    rng,
    conv_channels=(8, 16),
    dense_width=32,
    attention_ratio=4,
    attention=True,
):
    """Construct the extractor for a given input geometry (H, W, C).

    Image inputs (H and W > 1) get two conv blocks plus one dense block,
    with tap points after each of the three; 1x1 feature "pixels" get a
    two-block MLP with taps after each block. The attention ratio must
    divide the concatenated descriptor width.
    """
    h, w, c = geometry
    if h > 1 and w > 1:
        c1, c2 = conv_channels
        h1, w1 = (h - 4) // 2, (w - 4) // 2
        h2, w2 = (h1 - 4) // 2, (w1 - 4) // 2
        if h2 < 1 or w2 < 1:
            raise ShapeError(f"geometry {geometry} too small for two 5x5 conv blocks")
        layers = [
            Conv2d(5, 5, c, c1, rng),
            ReLU(),
            MaxPool2x2(),
            Conv2d(5, 5, c1, c2, rng),
            ReLU(),
            MaxPool2x2(),
            Flatten(),
            Dense(h2 * w2 * c2, dense_width, rng),
            ReLU(),
        ]
        taps = [2, 5, 8]
        dims = [c1, c2, dense_width]
    else:
        in_dim = h * w * c
        layers = [
            Flatten(),
            Dense(in_dim, dense_width, rng),
            ReLU(),
            Dense(dense_width, dense_width // 2, rng),
            ReLU(),
        ]
        taps = [2, 4]
        dims = [dense_width, dense_width // 2]
    backbone = Network(layers, taps)
    width = sum(dims)
    gate = AttentionGate(width, attention_ratio, rng) if attention else None
    head = Dense(width, 1, rng)
    return MultiScaleAttentionClassifier(backbone, gate, head, dims)


register_model_type(
    MultiScaleAttentionClassifier.model_type, MultiScaleAttentionClassifier.from_descriptor
)
