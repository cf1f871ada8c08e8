"""PU classifier training: descend the clipped risk, ascend when it clips.

Each iteration draws one batch from the tiny positive set and one from the
unlabeled pool. When the clipped term t is non-negative the step descends
the full risk; when t goes negative the step descends -gamma * t instead,
pushing t back toward zero rather than overfitting the current batch pair.
"""

from dataclasses import dataclass

import numpy as np

from ..data.splits import EpochShuffler
from ..errors import DivergenceError
from ..nn.optim import sgd_step
from .risk import PURiskTerms, pu_risk_gradients


@dataclass(frozen=True)
class PUStepReport:
    branch: str
    t: float
    risk: float
    terms: PURiskTerms


def pu_train_step(
    classifier, positive_images, unlabeled_images, class_prior, optimizer, gamma=1.0, epoch=0
):
    """One descent/ascent step on a batch pair; returns the step report.

    Both batches pass through the classifier as a single forward so layer
    caches stay coherent for the shared backward pass.
    """
    n_p = positive_images.shape[0]
    stacked = np.concatenate([positive_images, unlabeled_images])
    scores = classifier.forward(stacked)
    d_pos, d_unl, risk, t, terms = pu_risk_gradients(
        scores[:n_p], scores[n_p:], class_prior, gamma=gamma
    )
    if not np.isfinite(risk):
        raise DivergenceError(
            f"non-finite PU risk at learning rate {optimizer.rate_at(epoch)}"
        )
    classifier.zero_grad()
    classifier.backward(np.concatenate([d_pos, d_unl]))
    sgd_step(classifier.params(), optimizer, epoch)
    branch = "descent" if t >= 0.0 else "ascent"
    return PUStepReport(branch, t, risk, terms)


def train_pu_classifier(
    classifier,
    split,
    optimizer,
    epochs,
    batch_size,
    seed,
    gamma=1.0,
    iters_per_epoch=None,
    log_rows=None,
):
    """Run the full PU training loop; appends (epoch, iter, branch, t, risk)
    rows to ``log_rows`` when given and returns the classifier."""
    n_u = len(split.pool)
    pos_sampler = EpochShuffler(len(split.positives), batch_size, seed, "pu-positive-batches")
    unl_sampler = EpochShuffler(n_u, batch_size, seed, "pu-unlabeled-batches")
    if iters_per_epoch is None:
        iters_per_epoch = max(1, -(-n_u // batch_size))
    pos_images = split.positives.images
    pool_images = split.pool.images
    for epoch in range(epochs):
        for it in range(iters_per_epoch):
            pos_idx = pos_sampler.sample(batch_size)
            unl_idx = unl_sampler.next_batch()
            report = pu_train_step(
                classifier,
                pos_images[pos_idx],
                pool_images[unl_idx],
                split.class_prior,
                optimizer,
                gamma=gamma,
                epoch=epoch,
            )
            if log_rows is not None:
                log_rows.append((epoch, it, report.branch, report.t, report.risk))
        classifier_params_finite(classifier, optimizer, epoch)
    return classifier


def classifier_params_finite(classifier, optimizer, epoch):
    for p in classifier.params():
        if not np.all(np.isfinite(p.values)):
            raise DivergenceError(
                f"non-finite parameter after epoch {epoch} "
                f"(learning rate {optimizer.rate_at(epoch)})"
            )
