from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.nn.rng import Rng

import numpy as np


def sample_candidates(L: int, S: int, batch_labels: np.ndarray, rng: Rng) -> np.ndarray:
    '''Batch positives plus labels drawn uniformly without replacement from the rest, |result| = S.

    Returns:
        sorted label indices
    '''
    if S > L:
        raise ValueError(f'candidate count S={S} exceeds the number of labels L={L}')
    positives = np.unique(np.asarray(batch_labels, dtype=np.int64))
    if S < positives.size:
        raise ValueError(f'candidate count S={S} is smaller than the {positives.size} distinct batch labels')
    if S == L:
        return np.arange(L, dtype=np.int64)
    negatives = np.setdiff1d(np.arange(L, dtype=np.int64), positives, assume_unique=True)
    sampled = rng.generator.choice(negatives, size=S - positives.size, replace=False)
    return np.sort(np.concatenate([positives, sampled]))
