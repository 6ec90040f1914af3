import copy

import numpy as np
import pytest

from crossrec.enums import Domain, Method, SelectionCriterion
from crossrec.errors import EmptyDataError, MissingMetricError
from crossrec.models.dsn import DsnModel
from crossrec.models.model_config import DsnConfig, LossWeights
from crossrec.nn import Rng
from crossrec.training.dataset import DomainData, split_train_val
from crossrec.training.train_config import TrainConfig
from crossrec.training.trainer import Checkpoint, train, select_model, grid_search, pretrain_sdae, METRICS_FILENAME


MODEL_CONFIG = DsnConfig(code_dim=8, encoder_hidden=[16], decoder_hidden=[16], classifier_hidden=[16], discriminator_hidden=[16])


def _train_config(**kwargs) -> TrainConfig:
    return TrainConfig(**{'epochs': 2, 'batch_size': 32, 'weight_decay_grid': [1e-3], 'eval_ks': [1, 10, 100], **kwargs})


def _model(data) -> DsnModel:
    return DsnModel(data.input_dim, data.num_labels, MODEL_CONFIG, rng=Rng(0, 0))


def _ckpt(step, **metrics):
    return Checkpoint(step=step, epoch=step, weight_decay=0.0, metrics=metrics)


@pytest.mark.smoke
def test_select_model():
    ckpts = [_ckpt(1, ce=2.0, **{'ndcg@100': 0.3}), _ckpt(2, ce=1.0, **{'ndcg@100': 0.3}), _ckpt(3, ce=1.5, **{'ndcg@100': 0.2})]
    assert select_model(ckpts, SelectionCriterion.cross_entropy).step == 2
    # ties keep the earliest
    assert select_model(ckpts, SelectionCriterion.ndcg_at_100).step == 1


def test_select_model_errors():
    with pytest.raises(EmptyDataError):
        select_model([], SelectionCriterion.cross_entropy)
    with pytest.raises(MissingMetricError):
        select_model([_ckpt(1, ce=1.0)], SelectionCriterion.ndcg_at_100)


def test_train_records_every_step_and_epoch(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config()
    weights = LossWeights().for_method(Method.DSN)
    best, trace = train(_model(tiny_data), None, source, tiny_data.target, config, val, loss_weights=weights)
    steps_per_epoch = -(-len(source) // config.batch_size)
    assert len(trace.steps) == config.epochs * steps_per_epoch
    assert len(trace.epoch_losses) == len(trace.checkpoints) == config.epochs
    assert np.all(np.isfinite(trace.series('E')))
    assert any(c is best for c in trace.checkpoints)
    assert best.state is not None and best.path is None
    assert {'ce', 'ndcg@100', 'recall@10'} <= set(best.metrics)


def test_train_is_deterministic(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=1)
    _, a = train(_model(tiny_data), None, source, tiny_data.target, config, val)
    _, b = train(_model(tiny_data), None, source, tiny_data.target, config, val)
    np.testing.assert_array_equal(a.series('E'), b.series('E'))


@pytest.mark.smoke
def test_adaptation_terms_change_training_but_not_the_draws(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=1)
    config = _train_config(epochs=1, seed=1)
    base = LossWeights()
    _, dsn_trace = train(_model(tiny_data), None, source, tiny_data.target, config, val, loss_weights=base.for_method(Method.DSN))
    _, nn_trace = train(_model(tiny_data), None, source, tiny_data.target, config, val, loss_weights=base.for_method(Method.NN))
    dsn_task, nn_task = dsn_trace.series('L_task'), nn_trace.series('L_task')
    # same batches and dropout masks, so the first step sees identical parameters and draws
    assert dsn_task[0] == nn_task[0]
    assert not np.array_equal(dsn_task, nn_task)


def test_joint_sdae_training(tiny_data, tiny_run_config):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=1)
    sdae, _ = pretrain_sdae(tiny_data.item_features, tiny_run_config.sdae, config)
    before = [p.value.copy() for p in sdae.params]
    best, trace = train(_model(tiny_data), sdae, source, tiny_data.target, config, val, item_features=tiny_data.item_features)
    assert np.all(trace.series('L_item') > 0)
    assert any(not np.array_equal(b, p.value) for b, p in zip(before, sdae.params))
    # the single checkpoint carries the SDAE as trained, not the pretrained one
    pretrained = copy.deepcopy(sdae)
    pretrained.load_state_dict(dict(zip((p.name for p in sdae.params), before)))
    trained = best.load_sdae(template=pretrained)
    for p, q in zip(trained.params, sdae.params):
        np.testing.assert_array_equal(p.value, q.value)


def test_frozen_sdae_keeps_its_params_and_no_gradient(tiny_data, tiny_run_config):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=1, joint_sdae=False)
    sdae, _ = pretrain_sdae(tiny_data.item_features, tiny_run_config.sdae.model_copy(update={'epochs': 1}), config)
    before = sdae.state_dict()
    best, _ = train(_model(tiny_data), sdae, source, tiny_data.target, config, val, item_features=tiny_data.item_features)
    for p in sdae.params:
        np.testing.assert_array_equal(p.value, before[p.name])
        assert not np.any(p.grad)
    assert best.sdae_state is None and best.load_sdae(template=sdae) is sdae


def test_joint_sdae_is_checkpointed_next_to_the_model(tiny_data, tiny_run_config, tmp_path):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=1)
    sdae, _ = pretrain_sdae(tiny_data.item_features, tiny_run_config.sdae, config)
    best, _ = train(_model(tiny_data), sdae, source, tiny_data.target, config, val, item_features=tiny_data.item_features, checkpoint_dir=tmp_path)
    assert best.sdae_path == tmp_path / 'epoch-1.sdae.npz'
    loaded = best.load_sdae()
    for p, q in zip(loaded.params, sdae.params):
        np.testing.assert_array_equal(p.value, q.value)


def test_sampled_softmax_training(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=1, batch_size=8, candidate_count=20)
    _, trace = train(_model(tiny_data), None, source, tiny_data.target, config, val)
    assert np.all(np.isfinite(trace.series('L_task')))


def test_candidate_count_above_labels(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    with pytest.raises(ValueError):
        train(_model(tiny_data), None, source, tiny_data.target, _train_config(candidate_count=tiny_data.num_labels + 1), val)


def test_grid_search_pools_checkpoints(tiny_data, tmp_path):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=2, weight_decay_grid=[1e-2, 1e-4])
    result = grid_search(lambda: _model(tiny_data), None, source, tiny_data.target, config, val, checkpoint_dir=tmp_path)
    assert len(result.checkpoints) == 4
    assert set(result.traces) == {1e-2, 1e-4}
    assert (tmp_path / 'wd=0.01' / 'epoch-2.npz').is_file()
    assert (tmp_path / 'wd=0.0001' / 'epoch-1.npz').is_file()
    lines = (tmp_path / METRICS_FILENAME).read_text().splitlines()
    assert lines[0].split('\t')[:3] == ['weight_decay', 'epoch', 'step']
    assert len(lines) == 5
    model = result.best.load_model()
    assert isinstance(model, DsnModel)
    assert result.best.metrics['ndcg@100'] == max(c.metrics['ndcg@100'] for c in result.checkpoints)


def _toy_task(num_examples: int = 200, num_labels: int = 7, input_dim: int = 20):
    '''labels are readable from the first `num_labels` input features'''
    g = Rng(5).generator
    labels = np.arange(num_examples) % num_labels
    X = 0.1 * g.random((num_examples, input_dim))
    X[np.arange(num_examples), labels] += 1.0
    return DomainData(X, Domain.SOURCE, labels), DomainData(0.1 * g.random((num_examples, input_dim)), Domain.TARGET)


def test_toy_training_beats_the_uniform_predictor():
    source, target = _toy_task()
    model_config = DsnConfig(
        code_dim=8, encoder_hidden=[16], decoder_hidden=[16], classifier_hidden=[16], discriminator_hidden=[16],
        encoder_dropout=0.0, decoder_dropout=0.0, classifier_dropout=0.0,
    )
    model = DsnModel(source.input_dim, 7, model_config, rng=Rng(0, 0))
    config = _train_config(epochs=10, batch_size=20, lr=1e-2, weight_decay_grid=[0.0])
    weights = LossWeights().for_method(Method.NN)
    _, trace = train(model, None, source, target, config, source, loss_weights=weights)
    assert trace.checkpoints[-1].metrics['ce'] < np.log(7)


def test_stronger_weight_decay_gives_smaller_weights(tiny_data):
    source, val = split_train_val(tiny_data.source, 0.2, seed=0)
    config = _train_config(epochs=3)
    norms = {}
    for wd in (1e-1, 1e-4):
        model = _model(tiny_data)
        train(model, None, source, tiny_data.target, config, val, loss_weights=LossWeights().with_weight_decay(wd))
        norms[wd] = np.sqrt(sum(float(np.sum(p.value ** 2)) for p in model.weights))
    assert norms[1e-1] < norms[1e-4]
