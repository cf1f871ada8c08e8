"""Central finite-difference checker for the analytic backward passes."""

import numpy as np

from ..errors import GradCheckError
from .tensor import seeded_rng


def _relative_errors(analytic, numeric):
    denom = np.maximum(1e-8, np.abs(analytic) + np.abs(numeric))
    return np.abs(analytic - numeric) / denom


def grad_check(layer, x, h=1e-5, projection_seed=0):
    """Max relative error between analytic and central-difference gradients.

    The layer output is reduced to a scalar through a fixed random
    projection so a single backward pass yields every analytic gradient.
    Checked coordinates cover the input and all layer parameters. Raises
    GradCheckError naming the offending coordinate if anything goes
    non-finite.
    """
    x = np.asarray(x, dtype=np.float64)
    y = layer.forward(x)
    rng = seeded_rng(projection_seed, "gradcheck-projection")
    proj = rng.normal(size=y.shape)

    def objective():
        return float(np.sum(layer.forward(x) * proj))

    layer.zero_grad()
    layer.forward(x)
    dx = layer.backward(proj.copy())

    worst = 0.0
    checks = [("input", x, dx)]
    for pi, p in enumerate(layer.params()):
        checks.append((f"param{pi}", p.values, p.grad))

    for name, values, analytic in checks:
        flat = values.reshape(-1)
        analytic_flat = analytic.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            f_plus = objective()
            flat[i] = orig - h
            f_minus = objective()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * h)
            a = analytic_flat[i]
            if not (np.isfinite(a) and np.isfinite(numeric)):
                raise GradCheckError(
                    f"non-finite gradient at {name}[{i}]: analytic={a}, numeric={numeric}",
                    coordinate=(name, i),
                )
            err = _relative_errors(np.float64(a), np.float64(numeric))
            if err > worst:
                worst = float(err)
    layer.forward(x)
    return worst
