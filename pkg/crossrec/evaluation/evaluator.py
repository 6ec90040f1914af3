from __future__ import annotations
from typing import TYPE_CHECKING, Sequence
if TYPE_CHECKING:
    from scipy import sparse
    from crossrec.models.dsn import DsnModel

from dataclasses import dataclass

import numpy as np

from crossrec.enums import Method
from crossrec.nn.functional import softmax_ce_batch
from crossrec.evaluation.metrics import rank_items, recall_at_k, ndcg_at_k, empirical_target_risk
from crossrec.evaluation.report import EvalReport


DEFAULT_KS = (1, 10, 50, 100)
SCORING_BATCH_SIZE = 1024


def _dense(x) -> np.ndarray:
    return x.toarray() if hasattr(x, 'toarray') else np.asarray(x, dtype=np.float64)


def model_scores(model: DsnModel, X: np.ndarray | sparse.spmatrix, batch_size: int = SCORING_BATCH_SIZE) -> np.ndarray:
    '''Inference-mode logits v_k·u for every row of X, (n x L)'''
    n = X.shape[0]
    if n == 0:
        return np.zeros((0, model.num_labels))
    return np.vstack([model.scores(_dense(X[start:start + batch_size])) for start in range(0, n, batch_size)])


def softmax_cross_entropy(model: DsnModel, X: np.ndarray | sparse.spmatrix, labels: np.ndarray) -> float:
    '''Mean full-softmax cross-entropy'''
    labels = np.asarray(labels, dtype=np.int64)
    if not labels.size:
        raise ValueError('cannot compute cross-entropy of an empty set')
    loss, _ = softmax_ce_batch(model_scores(model, X), labels)
    return loss / labels.size


def ranking_metrics(ranked: np.ndarray, labels: np.ndarray, ks: Sequence[int] = DEFAULT_KS) -> dict[str, float]:
    metrics = {}
    for k in ks:
        metrics[f'recall@{k}'] = recall_at_k(ranked, labels, k)
    for k in ks:
        metrics[f'ndcg@{k}'] = ndcg_at_k(ranked, labels, k)
    return metrics


def validation_metrics(model: DsnModel, X: np.ndarray | sparse.spmatrix, labels: np.ndarray, ks: Sequence[int] = DEFAULT_KS) -> dict[str, float]:
    '''Checkpoint metrics: full-softmax CE plus recall/ndcg over the full ranking'''
    labels = np.asarray(labels, dtype=np.int64)
    scores = model_scores(model, X)
    loss, _ = softmax_ce_batch(scores, labels)
    return {'ce': loss / labels.size, **ranking_metrics(rank_items(scores), labels, ks)}


def build_report(method: Method | str, seed: int, ranked: np.ndarray, labels: np.ndarray, ks: Sequence[int] = DEFAULT_KS) -> EvalReport:
    return EvalReport(
        method=Method(method),
        seed=seed,
        n_test=len(labels),
        recall={k: recall_at_k(ranked, labels, k) for k in sorted(ks)},
        ndcg={k: ndcg_at_k(ranked, labels, k) for k in sorted(ks)},
        empirical_target_risk=empirical_target_risk(ranked, labels),
    )


def evaluate_model(method: Method | str, seed: int, model: DsnModel, X, labels: np.ndarray, ks: Sequence[int] = DEFAULT_KS) -> EvalReport:
    return build_report(method, seed, rank_items(model_scores(model, X)), np.asarray(labels, dtype=np.int64), ks)


def evaluate_popularity(seed: int, train_labels: np.ndarray, num_labels: int, labels: np.ndarray, ks: Sequence[int] = DEFAULT_KS) -> EvalReport:
    from crossrec.evaluation.metrics import popularity_baseline
    ranking = np.asarray(popularity_baseline(np.asarray(train_labels).tolist(), range(num_labels)), dtype=np.int64)
    ranked = np.broadcast_to(ranking, (len(labels), num_labels))
    return build_report(Method.POP, seed, ranked, np.asarray(labels, dtype=np.int64), ks)


@dataclass(frozen=True)
class Recommendation:
    # label indices ranked by descending score, ties by ascending index
    labels: np.ndarray
    scores: np.ndarray
    # K asked for more items than the model has labels
    truncated: bool = False


def recommend_topk(model: DsnModel, x: np.ndarray | sparse.spmatrix, K: int) -> Recommendation:
    '''Top-K items of one user by v_k·u, the same ordering as the full softmax.'''
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    scores = model_scores(model, x if x.ndim == 2 else x.reshape(1, -1))[0]
    ranked = rank_items(scores, K)[0]
    return Recommendation(labels=ranked, scores=scores[ranked], truncated=K > model.num_labels)
