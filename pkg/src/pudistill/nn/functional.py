"""Stateless numeric primitives used by layers, losses and PU risk."""

import numpy as np

from ..errors import ParameterError

#: Probabilities are clamped to this floor before any log. Keeps a confident
#: student from producing -inf cross-entropy; documented so tests can target it.
LOG_CLAMP = 1e-12


def sigmoid(x):
    """Numerically stable logistic function, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax_temperature(z, temperature):
    """Row-wise softmax of z / T.

    Works on a single vector or a batch of rows. The max logit is
    subtracted before exponentiation, so the result sums to one to within
    1e-12 and keeps the argmax of ``z`` for every positive temperature.
    """
    if temperature <= 0:
        raise ParameterError(f"temperature must be > 0, got {temperature}")
    z = np.asarray(z, dtype=np.float64)
    scaled = z / temperature
    shifted = scaled - scaled.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def weighted_soft_cross_entropy(p_te, p_st, weight):
    """w * (-sum_k p_te[k] * log p_st[k]) for one pair of distributions.

    ``p_st`` is clamped at LOG_CLAMP before the log. Gradients belong to
    the student side only; the target distribution is a constant.
    """
    if weight <= 0:
        raise ParameterError(f"weight must be > 0, got {weight}")
    p_te = np.asarray(p_te, dtype=np.float64)
    p_st = np.asarray(p_st, dtype=np.float64)
    return float(weight) * -float(np.sum(p_te * np.log(np.maximum(p_st, LOG_CLAMP))))


def soft_cross_entropy_rows(targets, outputs):
    """Per-row -sum_k t[k] log o[k] over a batch, with the same clamp."""
    targets = np.asarray(targets, dtype=np.float64)
    outputs = np.asarray(outputs, dtype=np.float64)
    return -np.sum(targets * np.log(np.maximum(outputs, LOG_CLAMP)), axis=-1)
