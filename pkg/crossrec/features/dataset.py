'''A cross-domain task on disk: two catalogs plus three log files.

    source_items.jsonl   source catalog
    target_items.jsonl   target catalog
    train_logs.tsv       source users (history + label event) and target users (history)
    val_logs.tsv         common users: target history + one source event (the label)
    test_logs.tsv        common users, same layout as val_logs.tsv
'''
from __future__ import annotations

from pathlib import Path
from dataclasses import dataclass, field

import numpy as np

from crossrec.enums import Domain
from crossrec.features.records import (
    Catalog,
    LabeledExample,
    LogEvent,
    read_catalog,
    write_catalog,
    read_logs,
    write_logs,
    source_examples,
    target_examples,
    common_user_examples,
)


CATALOG_FILENAMES = {Domain.SOURCE: 'source_items.jsonl', Domain.TARGET: 'target_items.jsonl'}
TRAIN_LOGS_FILENAME = 'train_logs.tsv'
VAL_LOGS_FILENAME = 'val_logs.tsv'
TEST_LOGS_FILENAME = 'test_logs.tsv'


@dataclass
class TaskData:
    catalogs: dict[Domain, Catalog]
    # labeled source examples
    source: list[LabeledExample]
    # unlabeled target histories
    target: list[LabeledExample]
    # common users: target history + source label
    test: list[LabeledExample]
    val: list[LabeledExample] = field(default_factory=list)

    @property
    def num_labels(self) -> int:
        return len(self.catalogs[Domain.SOURCE])

    def label_indices(self, examples: list[LabeledExample]) -> np.ndarray:
        index = self.catalogs[Domain.SOURCE].index
        return np.array([index[example.label] for example in examples], dtype=np.int64)


def _labeled_events(example: LabeledExample, label_timestamp: int) -> list[LogEvent]:
    history = example.history
    events = [LogEvent(history.user_id, ts, item_id, history.domain) for ts, item_id in history.events]
    if example.label is not None:
        events.append(LogEvent(history.user_id, label_timestamp, example.label, Domain.SOURCE))
    return events


def _examples_to_events(examples: list[LabeledExample]) -> list[LogEvent]:
    events = []
    for example in examples:
        last_ts = example.history.events[-1][0] if example.history.events else 0
        events.extend(_labeled_events(example, last_ts))
    return events


def write_task(task: TaskData, dir_path: str | Path) -> list[Path]:
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    paths = []
    for domain, filename in CATALOG_FILENAMES.items():
        write_catalog(dir_path / filename, task.catalogs[domain])
        paths.append(dir_path / filename)
    for filename, examples in (
        (TRAIN_LOGS_FILENAME, task.source + task.target),
        (VAL_LOGS_FILENAME, task.val),
        (TEST_LOGS_FILENAME, task.test),
    ):
        write_logs(dir_path / filename, _examples_to_events(examples))
        paths.append(dir_path / filename)
    return paths


def read_task(dir_path: str | Path) -> TaskData:
    dir_path = Path(dir_path)
    catalogs = {domain: read_catalog(dir_path / filename, domain) for domain, filename in CATALOG_FILENAMES.items()}
    train_events = read_logs(dir_path / TRAIN_LOGS_FILENAME)
    val_path = dir_path / VAL_LOGS_FILENAME
    val_events = read_logs(val_path) if val_path.is_file() else []
    return TaskData(
        catalogs=catalogs,
        source=source_examples(train_events, catalogs),
        target=target_examples(train_events, catalogs),
        test=common_user_examples(read_logs(dir_path / TEST_LOGS_FILENAME), catalogs),
        val=common_user_examples(val_events, catalogs) if val_events else [],
    )
