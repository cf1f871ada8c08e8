"""Student training against the worst vector of the perturbed weight family.

Every batch evaluates the class-weighted distillation loss under each
weight vector; the gradient step uses exactly the maximizing vector
(lowest index on ties), so one step solves the inner max of the
minimax objective. With a single-vector family this reduces to plain
weighted distillation, bit for bit.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..data.splits import EpochShuffler
from ..errors import BatchError, DivergenceError, ParameterError
from ..nn.functional import soft_cross_entropy_rows, softmax_temperature
from ..nn.optim import sgd_step
from .evaluate import evaluate_accuracy
from .targets import teacher_soft_targets
from .weights import (
    WeightVector,
    class_weight_vector,
    default_epsilon,
    perturb_weight_set,
)


def surrogate_kd_loss(target_probs, student_probs, categories, weights):
    """Mean over the batch of w[category_i] * CE(target_i, student_i)."""
    target_probs = np.asarray(target_probs, dtype=np.float64)
    student_probs = np.asarray(student_probs, dtype=np.float64)
    categories = np.asarray(categories, dtype=np.int64)
    if target_probs.shape[0] == 0:
        raise BatchError("surrogate loss needs a non-empty batch")
    w = weights.w if isinstance(weights, WeightVector) else np.asarray(weights)
    if categories.min() < 0 or categories.max() >= w.size:
        raise ParameterError("category index outside the weight vector")
    per_ce = soft_cross_entropy_rows(target_probs, student_probs)
    return float(np.mean(w[categories] * per_ce))


@dataclass(frozen=True)
class RKDStepReport:
    chosen_vector: int
    losses: np.ndarray


@dataclass
class DistillationRun:
    """Everything a distillation loop touches; the teacher stays frozen.

    Soft targets are computed once at construction and reused; the loop
    reads only ``target_probs``/``categories``, never the teacher.
    """

    teacher: object
    student: object
    images: np.ndarray
    target_probs: np.ndarray
    categories: np.ndarray
    weight_set: object
    optimizer: object
    temperature: float = 1.0
    robust: bool = True
    metrics: list = field(default_factory=list)


def prepare_distillation(
    teacher,
    student,
    extended_images,
    optimizer,
    temperature=1.0,
    robust=True,
    epsilon=None,
    num_vectors=10,
    floor=1e-3,
    seed=0,
    num_classes=None,
):
    """Build a DistillationRun: soft targets, base weights, perturbed family.

    ``robust=False`` gives uniform weights and a single-vector family,
    i.e. plain distillation.
    """
    probs, categories = teacher_soft_targets(teacher, extended_images, temperature)
    k = num_classes or probs.shape[1]
    if robust:
        base = class_weight_vector(probs)
        eps = default_epsilon(base) if epsilon is None else float(epsilon)
        weight_set = perturb_weight_set(base, eps, num_vectors, floor=floor, seed=seed)
    else:
        base = WeightVector(np.ones(k))
        weight_set = perturb_weight_set(base, 0.0, 1, floor=floor, seed=seed)
    return DistillationRun(
        teacher=teacher,
        student=student,
        images=extended_images,
        target_probs=probs,
        categories=categories,
        weight_set=weight_set,
        optimizer=optimizer,
        temperature=temperature,
        robust=robust,
    )


def rkd_train_step(run, batch_indices, epoch=0):
    """One minimax step on the given batch; returns the step report.

    The report carries the loss under every weight vector so the chosen
    maximum stays externally checkable even at zero learning rate.
    """
    imgs = run.images[batch_indices]
    targets = run.target_probs[batch_indices]
    cats = run.categories[batch_indices]
    m = imgs.shape[0]
    if m == 0:
        raise BatchError("empty distillation batch")

    logits = run.student.forward(imgs)
    student_probs = softmax_temperature(logits, run.temperature)
    per_ce = soft_cross_entropy_rows(targets, student_probs)
    vectors = run.weight_set.vectors
    losses = (vectors[:, cats] * per_ce).mean(axis=1)
    if not np.all(np.isfinite(losses)):
        raise DivergenceError("non-finite distillation loss")
    chosen = 0 if not run.robust else int(np.argmax(losses))

    sample_weight = vectors[chosen][cats] / m
    dlogits = sample_weight[:, None] * (student_probs - targets) / run.temperature
    run.student.zero_grad()
    run.student.backward(dlogits)
    sgd_step(run.student.params(), run.optimizer, epoch)
    return RKDStepReport(chosen, losses)


def run_distillation(run, epochs, batch_size, seed, test_set=None, log_every_epoch=True):
    """Full distillation loop; appends per-epoch metric dicts to run.metrics."""
    shuffler = EpochShuffler(run.images.shape[0], batch_size, seed, "distill-batches")
    for epoch in range(epochs):
        epoch_losses = []
        histogram = Counter()
        for batch in shuffler.epoch_batches():
            report = rkd_train_step(run, batch, epoch=epoch)
            epoch_losses.append(report.losses[report.chosen_vector])
            histogram[report.chosen_vector] += 1
        if not log_every_epoch:
            continue
        row = {
            "epoch": epoch,
            "train_loss": float(np.mean(epoch_losses)),
            "chosen_vector_histogram": format_histogram(histogram),
        }
        if test_set is not None:
            accuracy = evaluate_accuracy(run.student, test_set)
            row["test_top1"] = accuracy["top1"]
            if "top5" in accuracy:
                row["test_top5"] = accuracy["top5"]
        run.metrics.append(row)
    return run


def format_histogram(counter):
    return "|".join(f"{idx}:{counter[idx]}" for idx in sorted(counter))
