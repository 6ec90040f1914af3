import math

import numpy as np
import pytest

from crossrec.evaluation.metrics import (
    hit_ranks,
    recall_at_k,
    ndcg_at_k,
    empirical_target_risk,
    rank_items,
    popularity_baseline,
)


def _brute_force(ranked, labels, K):
    recall, ndcg = 0.0, 0.0
    for row, label in zip(ranked, labels):
        top = list(row[:K])
        if label in top:
            recall += 1.0
            ndcg += 1.0 / math.log2(top.index(label) + 2)
    return recall / len(labels), ndcg / len(labels)


@pytest.mark.smoke
def test_metrics_match_brute_force():
    rng = np.random.default_rng(0)
    ranked = np.array([rng.permutation(40) for _ in range(1000)])
    labels = rng.integers(0, 40, size=1000)
    for K in (1, 5, 10, 40):
        recall, ndcg = _brute_force(ranked, labels, K)
        assert recall_at_k(ranked, labels, K) == pytest.approx(recall, abs=1e-12)
        assert ndcg_at_k(ranked, labels, K) == pytest.approx(ndcg, abs=1e-12)


def test_single_hit_at_rank_three():
    ranked = [[7, 8, 9, 10]]
    assert ndcg_at_k(ranked, [9], 10) == pytest.approx(0.5)
    assert recall_at_k(ranked, [9], 2) == 0.0
    assert recall_at_k(ranked, [9], 3) == 1.0


def test_ragged_lists_and_misses():
    np.testing.assert_array_equal(hit_ranks([[1, 2], [3]], [2, 4]), [2, 0])
    assert ndcg_at_k([[1, 2], [3]], [2, 4], 10) == pytest.approx(0.5 / math.log2(3))


def test_risk_is_one_minus_recall_at_one():
    ranked = np.array([[0, 1], [1, 0], [1, 0], [0, 1]])
    labels = np.array([0, 0, 1, 1])
    assert empirical_target_risk(ranked, labels) == pytest.approx(0.5)


def test_metric_errors():
    with pytest.raises(ValueError):
        recall_at_k([[0]], [0], 0)
    with pytest.raises(ValueError):
        ndcg_at_k([[0], [1]], [0], 1)
    assert recall_at_k(np.zeros((0, 3), dtype=np.int64), [], 1) == 0.0


def test_rank_items_breaks_ties_by_index():
    scores = np.array([[0.5, 1.0, 0.5, 1.0], [0.0, 0.0, 0.0, 0.0]])
    np.testing.assert_array_equal(rank_items(scores), [[1, 3, 0, 2], [0, 1, 2, 3]])
    np.testing.assert_array_equal(rank_items(scores, K=2), [[1, 3], [0, 1]])
    assert rank_items(scores, K=10).shape == (2, 4)


def test_popularity_baseline():
    assert popularity_baseline(['b', 'a', 'b', 'c', 'a']) == ['a', 'b', 'c']
    assert popularity_baseline([2, 2, 0], all_labels=range(4)) == [2, 0, 1, 3]
