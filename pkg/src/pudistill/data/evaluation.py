"""Evaluation-only access to sealed pool labels.

This module is the single reader of ``UnlabeledPool``'s private sealed
labels. Training code must never import it; the boundary is covered by an
interface test.
"""

import numpy as np

from ..errors import EvaluationError


def sealed_positive_fraction(pool):
    labels = pool._sealed_labels
    if labels is None:
        raise EvaluationError("pool carries no sealed labels")
    return float(np.mean(labels == 1))


def selection_precision_recall(pool, selected_indices):
    """Precision and recall of a selected index set against sealed labels."""
    labels = pool._sealed_labels
    if labels is None:
        raise EvaluationError("pool carries no sealed labels")
    selected = np.asarray(selected_indices, dtype=np.int64)
    n_positive = int(np.sum(labels == 1))
    if selected.size == 0:
        return 0.0, 0.0
    hits = int(np.sum(labels[selected] == 1))
    precision = hits / selected.size
    recall = hits / n_positive if n_positive else 0.0
    return float(precision), float(recall)
