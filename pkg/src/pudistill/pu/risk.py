"""Non-negative positive-unlabeled risk over sigmoid margin losses.

The binary loss is instantiated as the sigmoid loss l(t, y) = sigmoid(-y*t):
bounded, smooth, and the standard choice for non-negative PU training. The
risk of a (positive batch, unlabeled batch) pair is

    risk = prior * r_p_plus + max(0, t),    t = r_x - prior * r_p_minus

where r_p_plus / r_p_minus are the positive batch's mean losses against
labels +1 / -1 and r_x is the unlabeled batch's mean loss against -1.
Clipping t at zero is what keeps the estimator from chasing a negative
implied negative-class risk (overfitting the current batch).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import BatchError, ParameterError
from ..nn.functional import sigmoid


def sigmoid_loss(score, label):
    """sigmoid(-label * score); label must be +1 or -1. Vectorizes over score."""
    if label not in (+1, -1):
        raise ParameterError(f"label must be +1 or -1, got {label}")
    return sigmoid(-label * np.asarray(score, dtype=np.float64))


def sigmoid_loss_grad(score, label):
    """d/dscore of sigmoid(-label*score) = -label * s * (1 - s)."""
    s = sigmoid_loss(score, label)
    return -label * s * (1.0 - s)


@dataclass(frozen=True)
class PURiskTerms:
    r_p_plus: float
    r_p_minus: float
    r_x: float
    t: float
    risk: float


def pu_risk(positive_scores, unlabeled_scores, class_prior):
    """Evaluate the clipped PU risk for one batch pair.

    Returns (risk, t, terms). ``class_prior`` may be 0 at the boundary
    (the positive term vanishes and the risk reduces to r_x); real splits
    validate (0, 1] at construction.
    """
    positive_scores = np.asarray(positive_scores, dtype=np.float64).reshape(-1)
    unlabeled_scores = np.asarray(unlabeled_scores, dtype=np.float64).reshape(-1)
    if positive_scores.size == 0 or unlabeled_scores.size == 0:
        raise BatchError("pu_risk needs non-empty positive and unlabeled batches")
    if not 0.0 <= class_prior <= 1.0:
        raise ParameterError(f"class_prior must be in [0, 1], got {class_prior}")

    r_p_plus = float(np.mean(sigmoid_loss(positive_scores, +1)))
    r_p_minus = float(np.mean(sigmoid_loss(positive_scores, -1)))
    r_x = float(np.mean(sigmoid_loss(unlabeled_scores, -1)))
    t = r_x - class_prior * r_p_minus
    risk = class_prior * r_p_plus + max(0.0, t)
    return risk, t, PURiskTerms(r_p_plus, r_p_minus, r_x, t, risk)


def pu_risk_gradients(positive_scores, unlabeled_scores, class_prior, gamma=1.0):
    """Score gradients for the branch implied by the sign of t.

    t >= 0: gradients of the full objective
        prior * r_p_plus + r_x - prior * r_p_minus.
    t < 0: gradients of -gamma * t, i.e. a scaled ascent on t that pushes
        the clipped term back toward zero.

    Returns (d_positive, d_unlabeled, risk, t, terms).
    """
    positive_scores = np.asarray(positive_scores, dtype=np.float64).reshape(-1)
    unlabeled_scores = np.asarray(unlabeled_scores, dtype=np.float64).reshape(-1)
    risk, t, terms = pu_risk(positive_scores, unlabeled_scores, class_prior)
    n_p = positive_scores.size
    n_u = unlabeled_scores.size
    grad_p_minus = sigmoid_loss_grad(positive_scores, -1) / n_p
    grad_u = sigmoid_loss_grad(unlabeled_scores, -1) / n_u
    if t >= 0.0:
        grad_p_plus = sigmoid_loss_grad(positive_scores, +1) / n_p
        d_positive = class_prior * (grad_p_plus - grad_p_minus)
        d_unlabeled = grad_u
    else:
        d_positive = gamma * class_prior * grad_p_minus
        d_unlabeled = -gamma * grad_u
    return d_positive, d_unlabeled, risk, t, terms
