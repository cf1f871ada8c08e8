"""Class weights from accumulated soft mass, and their perturbed family.

Classes that received little teacher soft mass get proportionally larger
weights: w_k = (K / y_k) / sum_j (1 / y_j), which sums to K. Because the
weights are estimated from noisy teacher responses, training hedges over a
finite family of vectors within an epsilon box around the base vector.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import BatchError, ParameterError
from ..nn.tensor import seeded_rng

#: Added to any zero class mass before inverting; exact zeros only occur on
#: tiny sets where a class never appears in the teacher's soft output.
ZERO_MASS_SMOOTHING = 1e-6


@dataclass(frozen=True)
class WeightVector:
    """K positive per-class weights summing to K (within 1e-9)."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        object.__setattr__(self, "w", w)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("weight vector must be a non-empty vector")
        if np.any(w <= 0):
            raise ParameterError("weight vector entries must be positive")
        if abs(float(w.sum()) - w.size) > 1e-9:
            raise ParameterError(
                f"weight vector sums to {w.sum()!r}, expected {w.size}"
            )

    @property
    def num_classes(self):
        return self.w.size


def class_weight_vector(target_probs):
    """Weight vector from a batch of teacher soft targets (N, K)."""
    probs = np.asarray(target_probs, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise BatchError("need at least one soft target to derive weights")
    mass = probs.sum(axis=0)
    if np.any(mass <= 0.0):
        mass = mass + ZERO_MASS_SMOOTHING
    if np.any(mass <= 0.0):
        raise ParameterError("accumulated class mass non-positive after smoothing")
    k = mass.size
    w = (k / mass) / (1.0 / mass).sum()
    return WeightVector(w)


@dataclass(frozen=True)
class PerturbedWeightSet:
    """The base vector plus n-1 boxed random perturbations of it.

    Perturbed entries stay within ``epsilon`` of the base entry and at or
    above ``floor``; they are deliberately not renormalized, which would
    break the epsilon box. Vector 0 is always the base itself.
    """

    vectors: np.ndarray
    base: WeightVector
    epsilon: float
    floor: float

    def __len__(self):
        return self.vectors.shape[0]


def perturb_weight_set(base, epsilon, count, floor=1e-3, seed=0):
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    if count < 1:
        raise ParameterError(f"need at least one vector, got {count}")
    if floor <= 0:
        raise ParameterError(f"floor must be > 0, got {floor}")
    if floor > float(base.w.min()):
        raise ParameterError(
            f"floor {floor} exceeds smallest base weight {base.w.min()}"
        )
    rng = seeded_rng(seed, "weight-perturbations")
    vectors = np.empty((count, base.num_classes))
    vectors[0] = base.w
    if count > 1:
        noise = rng.uniform(-epsilon, epsilon, size=(count - 1, base.num_classes))
        vectors[1:] = np.maximum(base.w + noise, floor)
    return PerturbedWeightSet(vectors, base, float(epsilon), float(floor))


def default_epsilon(base):
    """Default perturbation radius: a tenth of the smallest base weight."""
    return 0.1 * float(base.w.min())
