"""Positive-unlabeled split construction and batch cursors."""

import numpy as np

from ..errors import CapacityError
from ..nn.tensor import seeded_rng
from .types import LabeledSet, PUSplit, UnlabeledPool, crop_or_pad


def make_pu_split(original, n_l_per_class, pool, class_prior, seed=0):
    """Draw the tiny positive set and pair it with the unlabeled pool.

    ``n_l_per_class`` examples are drawn uniformly without replacement
    from every class of ``original``; they are the PU positives (their
    class labels are kept for later bookkeeping, but PU training treats
    them all as +1). Pool images are center-cropped-or-padded to the
    positives' geometry. The class prior is recorded verbatim.
    """
    if n_l_per_class < 1:
        raise CapacityError(f"n_l_per_class must be >= 1, got {n_l_per_class}")
    rng = seeded_rng(seed, "pu-split-draw")
    chosen = []
    for k in range(original.num_classes):
        members = original.class_indices(k)
        if members.size < n_l_per_class:
            raise CapacityError(
                f"class {k} holds {members.size} examples, need {n_l_per_class}"
            )
        chosen.append(rng.choice(members, size=n_l_per_class, replace=False))
    tiny = original.subset(np.sort(np.concatenate(chosen)), role="tiny")

    if pool.geometry[:2] != tiny.geometry[:2]:
        pool = UnlabeledPool(
            crop_or_pad(pool.images, tiny.geometry[:2]),
            sealed_labels=pool._sealed_labels,
            raw_features=pool.raw_features,
        )
    return PUSplit(tiny, pool, class_prior)


class EpochShuffler:
    """Private per-consumer cursor yielding shuffled batch indices."""

    def __init__(self, n, batch_size, seed, purpose="batches"):
        if batch_size < 1:
            raise CapacityError(f"batch_size must be >= 1, got {batch_size}")
        self.n = int(n)
        self.batch_size = int(batch_size)
        self._rng = seeded_rng(seed, purpose)
        self._order = None
        self._cursor = 0

    def next_batch(self):
        """Next slice of a shuffled permutation, reshuffling each epoch."""
        if self._order is None or self._cursor >= self.n:
            self._order = self._rng.permutation(self.n)
            self._cursor = 0
        batch = self._order[self._cursor : self._cursor + self.batch_size]
        self._cursor += self.batch_size
        return batch

    def sample(self, size):
        """Uniform draw, without replacement when the set is large enough."""
        return self._rng.choice(self.n, size=size, replace=self.n < size)

    def epoch_batches(self):
        """All batches of one fresh epoch, as a list of index arrays."""
        order = self._rng.permutation(self.n)
        return [order[i : i + self.batch_size] for i in range(0, self.n, self.batch_size)]
