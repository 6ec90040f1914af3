'''Single-relevance ranking metrics.

A ranked list holds label indices, best first. A label's rank is its 1-based position
in the list, 0 when absent.
'''
from __future__ import annotations
from typing import Hashable, Sequence

from collections import Counter

import numpy as np
from numba import njit


@njit(cache=True)
def _hit_ranks(ranked: np.ndarray, labels: np.ndarray) -> np.ndarray:
    n, k = ranked.shape
    ranks = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(k):
            if ranked[i, j] == labels[i]:
                ranks[i] = j + 1
                break
    return ranks


def _as_matrix(ranked_lists: np.ndarray | Sequence[Sequence[int]]) -> np.ndarray:
    if isinstance(ranked_lists, np.ndarray):
        return np.ascontiguousarray(ranked_lists, dtype=np.int64)
    width = max((len(row) for row in ranked_lists), default=0)
    # -1 pads ragged lists, never a valid label
    matrix = np.full((len(ranked_lists), width), -1, dtype=np.int64)
    for i, row in enumerate(ranked_lists):
        matrix[i, :len(row)] = row
    return matrix


def hit_ranks(ranked_lists: np.ndarray | Sequence[Sequence[int]], labels: np.ndarray | Sequence[int]) -> np.ndarray:
    ranked = _as_matrix(ranked_lists)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if ranked.shape[0] != labels.shape[0]:
        raise ValueError(f'{ranked.shape[0]} ranked lists but {labels.shape[0]} labels')
    return _hit_ranks(ranked, labels)


def _check_k(K: int):
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')


def recall_at_k(ranked_lists, labels, K: int) -> float:
    '''(1/n)·Σ_i 1[y_i in top-K of list i]'''
    _check_k(K)
    ranks = hit_ranks(ranked_lists, labels)
    if not ranks.size:
        return 0.0
    return float(np.mean((ranks >= 1) & (ranks <= K)))


def ndcg_at_k(ranked_lists, labels, K: int) -> float:
    '''(1/n)·Σ_i 1/log2(rank_i + 1) over hits within the top K'''
    _check_k(K)
    ranks = hit_ranks(ranked_lists, labels)
    if not ranks.size:
        return 0.0
    hit = (ranks >= 1) & (ranks <= K)
    gains = np.zeros(ranks.shape, dtype=np.float64)
    gains[hit] = 1.0 / np.log2(ranks[hit] + 1.0)
    return float(np.mean(gains))


def empirical_target_risk(ranked_lists, labels) -> float:
    '''Top-1 error rate, defined as 1 - recall@1'''
    return 1.0 - recall_at_k(ranked_lists, labels, 1)


def rank_items(scores: np.ndarray, K: int | None = None) -> np.ndarray:
    '''Top-K label indices per row by descending score, ties by ascending index.

    Every ranking in the package (evaluation, checkpoint selection, serving) goes through here.
    '''
    scores = np.atleast_2d(scores)
    num_labels = scores.shape[1]
    K = num_labels if K is None else min(K, num_labels)
    _check_k(K)
    # a stable sort of the negated scores keeps lower indices first among equal scores
    order = np.argsort(-scores, axis=1, kind='stable')
    return order[:, :K]


def popularity_baseline(train_labels: Sequence[Hashable], all_labels: Sequence[Hashable] | None = None) -> list:
    '''Labels by descending training frequency, ties by ascending label.
    Labels in `all_labels` that never occur in training are appended with count 0.
    '''
    counts = Counter(train_labels)
    if all_labels is not None:
        for label in all_labels:
            counts.setdefault(label, 0)
    return sorted(counts, key=lambda label: (-counts[label], label))
