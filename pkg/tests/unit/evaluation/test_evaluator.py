import numpy as np
import pytest

from crossrec.enums import Method
from crossrec.evaluation.evaluator import (
    model_scores,
    softmax_cross_entropy,
    validation_metrics,
    evaluate_model,
    evaluate_popularity,
    recommend_topk,
)
from crossrec.models.dsn import DsnModel
from crossrec.models.model_config import DsnConfig
from crossrec.nn import Rng


CONFIG = DsnConfig(code_dim=4, encoder_hidden=[8], decoder_hidden=[8], classifier_hidden=[8], discriminator_hidden=[8])


@pytest.fixture
def model():
    return DsnModel(6, 5, CONFIG, rng=Rng(0))


@pytest.fixture
def X():
    return np.random.default_rng(1).random((20, 6))


def test_scores_are_batched_consistently(model, X):
    np.testing.assert_allclose(model_scores(model, X, batch_size=3), model_scores(model, X), rtol=0, atol=1e-12)
    assert model_scores(model, X[:0]).shape == (0, 5)


def test_validation_metrics(model, X):
    labels = np.arange(20) % 5
    metrics = validation_metrics(model, X, labels, ks=[1, 5])
    assert set(metrics) == {'ce', 'recall@1', 'recall@5', 'ndcg@1', 'ndcg@5'}
    assert metrics['recall@5'] == 1.0
    assert metrics['ce'] == pytest.approx(softmax_cross_entropy(model, X, labels))


def test_evaluate_model(model, X):
    labels = np.arange(20) % 5
    report = evaluate_model(Method.DSN, 3, model, X, labels, ks=[1, 5])
    assert report.method == Method.DSN and report.seed == 3 and report.n_test == 20
    assert report.empirical_target_risk == pytest.approx(1.0 - report.recall[1])


def test_popularity_report():
    report = evaluate_popularity(0, train_labels=[2, 2, 1], num_labels=4, labels=[2, 1, 3], ks=[1, 2])
    assert report.method == Method.POP
    assert report.recall == {1: pytest.approx(1 / 3), 2: pytest.approx(2 / 3)}


@pytest.mark.smoke
def test_recommend_topk(model, X):
    rec = recommend_topk(model, X[0], 3)
    scores = model_scores(model, X[:1])[0]
    np.testing.assert_array_equal(rec.labels, np.argsort(-scores, kind='stable')[:3])
    assert np.all(np.diff(rec.scores) <= 0)
    assert not rec.truncated


def test_recommend_more_than_the_catalog(model, X):
    rec = recommend_topk(model, X[:1], 8)
    assert rec.truncated
    assert rec.labels.size == 5
    with pytest.raises(ValueError):
        recommend_topk(model, X[0], 0)
