"""Top-1 / top-5 accuracy on a labeled test set."""

import numpy as np

from ..errors import EvaluationError


def evaluate_accuracy(network, test_set, batch_size=256):
    """Fraction of examples whose argmax output (lowest index on ties)
    matches the label; adds top-5 when there are at least 5 classes."""
    n = len(test_set)
    if n == 0:
        raise EvaluationError("cannot evaluate on an empty test set")
    labels = test_set.labels
    correct = 0
    top5_correct = 0
    want_top5 = test_set.num_classes >= 5
    for i in range(0, n, batch_size):
        logits = network.forward(test_set.images[i : i + batch_size])
        batch_labels = labels[i : i + batch_size]
        correct += int(np.sum(logits.argmax(axis=1) == batch_labels))
        if want_top5:
            ranked = np.argsort(-logits, axis=1, kind="stable")[:, :5]
            top5_correct += int(np.sum(ranked == batch_labels[:, None]))
    out = {"top1": correct / n}
    if want_top5:
        out["top5"] = top5_correct / n
    return out
