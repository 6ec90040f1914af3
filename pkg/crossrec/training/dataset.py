from __future__ import annotations
from typing import Iterator

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from sklearn.model_selection import train_test_split

from crossrec.enums import Domain
from crossrec.errors import EmptyDataError
from crossrec.models.dsn import Batch
from crossrec.nn import Rng


def _dense(x) -> np.ndarray:
    return x.toarray() if sparse.issparse(x) else np.asarray(x, dtype=np.float64)


@dataclass
class DomainData:
    '''Feature rows of one domain, labeled (source) or not (target).'''
    X: sparse.csr_matrix | np.ndarray
    domain: Domain
    labels: np.ndarray | None = None

    def __post_init__(self):
        self.domain = Domain(self.domain)
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            assert self.labels.shape == (self.X.shape[0],), f'{self.X.shape[0]} rows but labels of shape {self.labels.shape}'

    def __len__(self):
        return self.X.shape[0]

    @property
    def input_dim(self) -> int:
        return self.X.shape[1]

    def subset(self, rows: np.ndarray) -> DomainData:
        return DomainData(self.X[rows], self.domain, None if self.labels is None else self.labels[rows])

    def batch(self, rows: np.ndarray, item_features: sparse.csr_matrix | np.ndarray | None = None) -> Batch:
        '''Dense batch of `rows`; for labeled data `item_features` adds the label items' vectors.'''
        labels = None if self.labels is None else self.labels[rows]
        item_inputs = None
        if labels is not None and item_features is not None:
            item_inputs = _dense(item_features[labels])
        return Batch.of(_dense(self.X[rows]), self.domain, labels=labels, item_inputs=item_inputs)


def split_train_val(data: DomainData, val_fraction: float, seed: int) -> tuple[DomainData, DomainData]:
    '''Uniform user-level split, each row is one user.'''
    if len(data) < 2:
        raise EmptyDataError(f'need at least 2 examples to split, got {len(data)}')
    train_rows, val_rows = train_test_split(np.arange(len(data)), test_size=val_fraction, random_state=seed, shuffle=True)
    return data.subset(np.sort(train_rows)), data.subset(np.sort(val_rows))


def epoch_order(n: int, seed: int, epoch: int, stream: int = 0) -> np.ndarray:
    '''Row order of one pass, a pure function of (seed, stream, epoch).'''
    return Rng(seed, 1, stream, epoch).generator.permutation(n)


def num_steps_per_epoch(num_source: int, batch_size: int) -> int:
    return math.ceil(num_source / batch_size)


def cycled_batches(n: int, batch_size: int, seed: int, stream: int) -> Iterator[np.ndarray]:
    '''Endless batches over permutations of [0, n); a pass ends with a short batch when n % batch_size != 0.'''
    epoch = 0
    while True:
        order = epoch_order(n, seed, epoch, stream)
        for start in range(0, n, batch_size):
            yield order[start:start + batch_size]
        epoch += 1
