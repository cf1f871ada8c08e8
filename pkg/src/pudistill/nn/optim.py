"""SGD with momentum, weight decay and a divide-by-10 step schedule."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError


def learning_rate_at(base_rate, epoch, schedule_step):
    """Step decay: the base rate divided by 10 every ``schedule_step`` epochs."""
    if schedule_step is None or schedule_step <= 0:
        return base_rate
    return base_rate / (10.0 ** (epoch // schedule_step))


@dataclass
class OptimizerState:
    """Hyperparameters plus per-parameter velocity buffers.

    ``learning_rate`` may be zero (a zero step leaves parameters alone,
    which the tests rely on); negative rates are rejected. Velocities are
    keyed by position in the parameter list, so the same state must always
    be used with the same parameter ordering.
    """

    learning_rate: float
    momentum: float = 0.0
    weight_decay: float = 0.0
    schedule_step: int | None = None
    velocities: list = field(default_factory=list)

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ParameterError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ParameterError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.weight_decay < 0:
            raise ParameterError(f"weight_decay must be >= 0, got {self.weight_decay}")

    def rate_at(self, epoch):
        return learning_rate_at(self.learning_rate, epoch, self.schedule_step)


def sgd_step(params, state, epoch=0):
    """One momentum-SGD update over ``params`` using their current grads.

    v <- momentum * v + grad + weight_decay * param
    param <- param - rate(epoch) * v
    """
    if not state.velocities:
        state.velocities = [np.zeros_like(p.values) for p in params]
    if len(state.velocities) != len(params):
        raise ParameterError(
            f"optimizer tracks {len(state.velocities)} parameters, got {len(params)}"
        )
    rate = state.rate_at(epoch)
    for p, v in zip(params, state.velocities):
        v *= state.momentum
        v += p.grad
        if state.weight_decay:
            v += state.weight_decay * p.values
        p.values -= rate * v
