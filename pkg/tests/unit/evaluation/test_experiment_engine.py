import numpy as np
import pytest

from crossrec.enums import Method
from crossrec.engines.experiment_engine import ExperimentEngine, test_subset as draw_test_subset
from crossrec.evaluation.report import REPORT_FILENAME


def _config(run_config, **eval_update):
    return run_config.model_copy(update={
        'eval': run_config.eval.model_copy(update=eval_update),
        'train': run_config.train.model_copy(update={'epochs': 1}),
    })


def test_test_subset_is_seeded(tiny_data):
    a = draw_test_subset(tiny_data.test, 0.5, seed=0)
    assert len(a) == 30
    np.testing.assert_array_equal(a.labels, draw_test_subset(tiny_data.test, 0.5, seed=0).labels)
    assert draw_test_subset(tiny_data.test, 1.0, seed=0) is tiny_data.test


@pytest.mark.smoke
def test_popularity_needs_no_model(tiny_run_config, tiny_data, mocker):
    config = _config(tiny_run_config, methods=[Method.POP], seeds=[0, 1])
    engine = ExperimentEngine(config, tiny_data)
    train_method = mocker.spy(engine, 'train_method')
    sdae_for_seed = mocker.spy(engine, 'sdae_for_seed')
    reports = engine.run()
    assert [(r.method, r.seed) for r in reports] == [(Method.POP, 0), (Method.POP, 1)]
    assert train_method.call_count == 0 and sdae_for_seed.call_count == 0
    assert all(r.n_test == 48 for r in reports)


def test_run_writes_reports_and_checkpoints(tiny_run_config, tiny_data, tmp_path):
    config = _config(tiny_run_config, methods=[Method.NN, Method.POP], seeds=[0])
    reports = ExperimentEngine(config, tiny_data, out_dir=tmp_path).run()
    assert [r.method for r in reports] == [Method.NN, Method.POP]
    assert (tmp_path / 'reports' / REPORT_FILENAME).is_file()
    assert (tmp_path / 'reports' / 'MANIFEST').is_file()
    assert (tmp_path / 'checkpoints' / 'seed=0' / 'NN' / 'metrics.tsv').is_file()


def test_parallel_seeds_match_sequential(tiny_run_config, tiny_data):
    config = _config(tiny_run_config, methods=[Method.NN], seeds=[0, 1])
    sequential = ExperimentEngine(config, tiny_data).run()
    parallel = ExperimentEngine(config, tiny_data, num_workers=2).run()
    assert [r.to_dict() for r in sequential] == [r.to_dict() for r in parallel]


def test_unseen_labels_are_initialized_from_the_jointly_trained_sdae(tiny_run_config, tiny_data, mocker):
    from crossrec.engines import experiment_engine
    from crossrec.training.trainer import Checkpoint
    config = _config(tiny_run_config, methods=[Method.I_DSN], seeds=[0], init_unseen_from_sdae=True)
    engine = ExperimentEngine(config, tiny_data)
    pretrained = engine.sdae_for_seed(0)
    load_sdae = mocker.spy(Checkpoint, 'load_sdae')
    init_unseen = mocker.spy(experiment_engine, 'init_unseen_from_sdae')
    engine.run()
    items = tiny_data.item_features.toarray()
    codes = init_unseen.call_args.args[1]
    np.testing.assert_array_equal(codes, load_sdae.spy_return.encode(items))
    assert not np.allclose(codes, pretrained.encode(items))
