"""Pool selection and dataset extension."""

import numpy as np

from ..data.types import ExtendedSet
from ..errors import BoundsError


def select_positives(classifier, pool, batch_size=256):
    """Indices i with F(x_i) > 0, ascending. Exactly zero scores are left out."""
    if len(pool) == 0:
        return np.zeros(0, dtype=np.int64)
    scores = classifier.scores(pool.images, batch_size=batch_size)
    return np.nonzero(scores > 0.0)[0].astype(np.int64)


def extend_dataset(tiny, pool, selected_indices):
    """Unify the tiny labeled set with the selected pool examples.

    Selected examples enter without class labels (hard label -1); their
    categories come later from teacher soft targets.
    """
    selected = np.asarray(selected_indices, dtype=np.int64)
    if selected.size and (selected.min() < 0 or selected.max() >= len(pool)):
        raise BoundsError(
            f"selected index outside pool of {len(pool)} examples"
        )
    images = np.concatenate([tiny.images, pool.images[selected]])
    hard = np.concatenate(
        [tiny.labels, np.full(selected.size, -1, dtype=np.int64)]
    )
    return ExtendedSet(images, hard, tiny.num_classes, n_tiny=len(tiny))


def write_index_file(path, indices):
    """Newline-delimited ascending decimal indices, LF endings."""
    indices = np.asarray(indices, dtype=np.int64)
    with open(path, "w", newline="\n") as fh:
        for i in indices:
            fh.write(f"{int(i)}\n")


def read_index_file(path):
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
