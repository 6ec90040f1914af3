'''Paired-domain synthetic task with controllable domain shift.

Topics tie everything together: items have topic mixtures ψ, users have topic
preferences p, and a user consumes item k with probability ∝ exp(c·<p, ψ_k>).
Target users act on q = (1-s)·p + s·p[perm], so `shift` moves the target feature
distribution while labels keep depending on p.
'''
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from crossrec.enums import Domain
from crossrec.errors import ConfigError
from crossrec.nn import Rng
from crossrec.nn.functional import softmax
from crossrec.features.records import ItemRecord, UserHistory, LabeledExample, Catalog, MAX_PLAYTIME_SECONDS
from crossrec.features.dataset import TaskData
from crossrec.synth.synth_config import SynthConfig


logger = logging.getLogger('crossrec')

TITLE_LENGTH = 5
CAST_POOL_PER_TOPIC = 20
TARGET_CATEGORY = 'news'
BASE_TIMESTAMP = 1_600_000_000


@dataclass
class SynthTask(TaskData):
    # p_u of every test user, (n_test x T)
    test_preferences: np.ndarray | None = None
    # ψ of every source item, (L x T)
    item_topics: np.ndarray | None = None
    config: SynthConfig | None = None


def _token_names(ids: np.ndarray) -> list[str]:
    return [f'w{j}' for j in ids]


def _preference_probs(prefs: np.ndarray, topics: np.ndarray, temperature: float) -> np.ndarray:
    return softmax(temperature * prefs @ topics.T)


def _draw_items(rng: Rng, probs: np.ndarray, lengths: np.ndarray) -> list[np.ndarray]:
    g = rng.generator
    num_items = probs.shape[1]
    return [g.choice(num_items, size=int(n), p=p) for p, n in zip(probs, lengths)]


def _timestamps(rng: Rng, n: int) -> list[int]:
    g = rng.generator
    start = BASE_TIMESTAMP + int(g.integers(0, 10_000_000))
    return (start + np.cumsum(g.integers(60, 86_400, size=n))).tolist()


def _source_catalog(config: SynthConfig, rng: Rng, item_topics: np.ndarray, topic_words: np.ndarray) -> Catalog:
    g = rng.generator
    playtime_means = g.uniform(600, 7200, size=config.num_topics)
    items = []
    for k, psi in enumerate(item_topics):
        word_probs = psi @ topic_words
        tokens = _token_names(g.choice(topic_words.shape[1], size=config.item_text_length, p=word_probs / word_probs.sum()))
        title_length = min(TITLE_LENGTH, len(tokens) - 1)
        cast_topics = g.choice(config.num_topics, size=config.cast_size, p=psi)
        cast = [f'cast{t}x{g.integers(CAST_POOL_PER_TOPIC)}' for t in cast_topics]
        topic = int(np.argmax(psi))
        playtime = int(np.clip(round(g.normal(playtime_means[topic], 600.0)), 0, MAX_PLAYTIME_SECONDS - 1))
        items.append(ItemRecord(
            item_id=f'v{k:05d}',
            title=' '.join(tokens[:title_length]),
            category=f'c{topic}',
            description=' '.join(tokens[title_length:]),
            cast=' '.join(cast),
            playtime_seconds=playtime,
        ))
    return Catalog(items, Domain.SOURCE)


def _target_catalog(config: SynthConfig, rng: Rng, item_topics: np.ndarray, topic_words: np.ndarray) -> Catalog:
    g = rng.generator
    items = []
    for k, psi in enumerate(item_topics):
        word_probs = psi @ topic_words
        tokens = _token_names(g.choice(topic_words.shape[1], size=config.item_text_length, p=word_probs / word_probs.sum()))
        title_length = min(TITLE_LENGTH, len(tokens) - 1)
        items.append(ItemRecord(
            item_id=f'n{k:05d}',
            title=' '.join(tokens[:title_length]),
            category=TARGET_CATEGORY,
            description=' '.join(tokens[title_length:]),
        ))
    return Catalog(items, Domain.TARGET)


def _history(user_id: str, domain: Domain, item_ids: list[str], timestamps: list[int]) -> UserHistory:
    return UserHistory(user_id, domain, list(zip(timestamps, item_ids)))


def _common_users(
    config: SynthConfig,
    rng: Rng,
    prefix: str,
    n: int,
    perm: np.ndarray,
    source_topics: np.ndarray,
    target_topics: np.ndarray,
    source_ids: list[str],
    target_ids: list[str],
) -> tuple[list[LabeledExample], np.ndarray]:
    '''Users of both services: target history from q_u, source label from p_u'''
    g = rng.generator
    prefs = g.dirichlet(np.full(config.num_topics, config.user_topic_concentration), size=n)
    shifted = (1.0 - config.shift) * prefs + config.shift * prefs[:, perm]
    lengths = g.integers(config.history_min, config.history_max + 1, size=n)
    histories = _draw_items(rng.child(0), _preference_probs(shifted, target_topics, config.temperature), lengths)
    labels = _draw_items(rng.child(1), _preference_probs(prefs, source_topics, config.temperature), np.ones(n, dtype=np.int64))
    ts_rng = rng.child(2)
    examples = []
    for i, (history, label) in enumerate(zip(histories, labels)):
        user_id = f'{prefix}{i:06d}'
        timestamps = _timestamps(ts_rng, len(history))
        examples.append(LabeledExample(
            _history(user_id, Domain.TARGET, [target_ids[j] for j in history], timestamps),
            source_ids[int(label[0])],
        ))
    return examples, prefs


def _generate_once(config: SynthConfig, rng: Rng) -> SynthTask:
    T, V_S, V_T = config.num_topics, config.source_vocab_size, config.target_vocab_size
    g = rng.child(0).generator
    source_words = g.dirichlet(np.full(V_S, config.topic_word_concentration), size=T)
    target_own_words = g.dirichlet(np.full(V_T, config.topic_word_concentration), size=T)
    # target tokens: source ids [0, V_S) with mass ρ, target-only ids [V_S, V_S + V_T) with mass 1-ρ
    target_words = np.hstack([config.vocab_overlap * source_words, (1.0 - config.vocab_overlap) * target_own_words])

    g = rng.child(1).generator
    source_topics = g.dirichlet(np.full(T, config.item_topic_concentration), size=config.num_items)
    target_topics = g.dirichlet(np.full(T, config.item_topic_concentration), size=config.num_target_items)
    perm = g.permutation(T)

    catalogs = {
        Domain.SOURCE: _source_catalog(config, rng.child(2), source_topics, source_words),
        Domain.TARGET: _target_catalog(config, rng.child(3), target_topics, target_words),
    }
    source_ids = catalogs[Domain.SOURCE].item_ids
    target_ids = catalogs[Domain.TARGET].item_ids

    # source users: history + held-out next item
    user_rng = rng.child(4)
    g = user_rng.generator
    prefs = g.dirichlet(np.full(T, config.user_topic_concentration), size=config.n_source)
    lengths = g.integers(config.history_min, config.history_max + 1, size=config.n_source)
    consumed = _draw_items(user_rng.child(0), _preference_probs(prefs, source_topics, config.temperature), lengths + 1)
    ts_rng = user_rng.child(1)
    source = []
    for i, items in enumerate(consumed):
        user_id = f's{i:06d}'
        timestamps = _timestamps(ts_rng, len(items))
        source.append(LabeledExample(
            _history(user_id, Domain.SOURCE, [source_ids[j] for j in items[:-1]], timestamps[:-1]),
            source_ids[int(items[-1])],
        ))

    # target users: unlabeled, preferences shifted
    user_rng = rng.child(5)
    g = user_rng.generator
    prefs = g.dirichlet(np.full(T, config.user_topic_concentration), size=config.n_target)
    shifted = (1.0 - config.shift) * prefs + config.shift * prefs[:, perm]
    lengths = g.integers(config.history_min, config.history_max + 1, size=config.n_target)
    consumed = _draw_items(user_rng.child(0), _preference_probs(shifted, target_topics, config.temperature), lengths)
    ts_rng = user_rng.child(1)
    target = [
        LabeledExample(_history(f't{i:06d}', Domain.TARGET, [target_ids[j] for j in items], _timestamps(ts_rng, len(items))))
        for i, items in enumerate(consumed)
    ]

    common = (perm, source_topics, target_topics, source_ids, target_ids)
    test, test_preferences = _common_users(config, rng.child(6), 'x', config.n_test, *common)
    val = _common_users(config, rng.child(7), 'y', config.n_val, *common)[0] if config.n_val else []

    return SynthTask(
        catalogs=catalogs,
        source=source,
        target=target,
        test=test,
        val=val,
        test_preferences=test_preferences,
        item_topics=source_topics,
        config=config,
    )


def max_label_share(task: TaskData) -> float:
    counts = np.bincount(task.label_indices(task.source), minlength=task.num_labels)
    return float(counts.max() / counts.sum())


def generate(config: SynthConfig | None = None) -> SynthTask:
    '''Deterministic in config.seed; re-draws when one item dominates the source labels.'''
    config = config or SynthConfig()
    for attempt in range(config.max_redraws):
        task = _generate_once(config, Rng(config.seed, attempt))
        share = max_label_share(task)
        if share <= config.max_label_share:
            logger.debug(f'generated synthetic task on attempt {attempt + 1}, max label share {share:.3f}')
            return task
        logger.warning(f'max label share {share:.3f} > {config.max_label_share}, re-drawing (attempt {attempt + 1})')
    raise ConfigError(f'label marginal stayed degenerate after {config.max_redraws} draws, lower the temperature')
