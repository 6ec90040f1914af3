import numpy as np
import pytest

from crossrec.enums import Domain
from crossrec.errors import ConfigError
from crossrec.synth.generator import generate, max_label_share
from crossrec.synth.synth_config import SynthConfig


@pytest.mark.smoke
def test_sizes_and_ids(tiny_task, tiny_synth_config):
    config = tiny_synth_config
    assert len(tiny_task.catalogs[Domain.SOURCE]) == tiny_task.num_labels == config.num_items
    assert len(tiny_task.catalogs[Domain.TARGET]) == config.num_target_items
    assert (len(tiny_task.source), len(tiny_task.target), len(tiny_task.test), len(tiny_task.val)) == (
        config.n_source, config.n_target, config.n_test, config.n_val,
    )
    assert all(e.history.user_id.startswith('s') for e in tiny_task.source)
    assert all(e.history.user_id.startswith('x') for e in tiny_task.test)
    assert all(e.history.user_id.startswith('y') for e in tiny_task.val)
    assert all(e.label is None for e in tiny_task.target)
    assert tiny_task.test_preferences.shape == (config.n_test, config.num_topics)


def test_histories_follow_the_domains(tiny_task, tiny_synth_config):
    source_ids = set(tiny_task.catalogs[Domain.SOURCE].item_ids)
    target_ids = set(tiny_task.catalogs[Domain.TARGET].item_ids)
    for example in tiny_task.source:
        assert tiny_synth_config.history_min <= len(example.history.events) <= tiny_synth_config.history_max
        assert {item for _, item in example.history.events} <= source_ids
        assert example.label in source_ids
    for example in tiny_task.test:
        assert example.history.domain == Domain.TARGET
        assert {item for _, item in example.history.events} <= target_ids
        timestamps = [ts for ts, _ in example.history.events]
        assert timestamps == sorted(timestamps)


def test_label_marginal_is_capped(tiny_task, tiny_synth_config):
    assert max_label_share(tiny_task) <= tiny_synth_config.max_label_share


def test_same_seed_same_task(tiny_synth_config):
    a, b = generate(tiny_synth_config), generate(tiny_synth_config)
    assert a.source == b.source and a.test == b.test
    np.testing.assert_array_equal(a.item_topics, b.item_topics)
    c = generate(tiny_synth_config.model_copy(update={'seed': 1}))
    assert c.source != a.source


def test_degenerate_label_marginal():
    config = SynthConfig(num_items=1, n_source=20, n_target=5, n_test=5, n_val=0, max_redraws=2, source_vocab_size=10, target_vocab_size=10)
    with pytest.raises(ConfigError):
        generate(config)


def test_history_bounds_validated():
    with pytest.raises(ValueError):
        SynthConfig(history_min=5, history_max=2)
