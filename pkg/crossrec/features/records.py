'''Item catalogs and interaction logs.

Catalog files are JSON lines, one item per line:
    {"item_id": "v0001", "title": "...", "category": "film", "description": "...", "cast": "...", "playtime_seconds": 3661}
Log files are tab-separated, one event per line, no header:
    user_id <TAB> timestamp <TAB> item_id <TAB> domain
'''
from __future__ import annotations

from pathlib import Path
from collections import defaultdict
from dataclasses import dataclass, field, asdict

import orjson

from crossrec.enums import Domain
from crossrec.errors import EmptyDataError


MAX_PLAYTIME_SECONDS = 360_000


@dataclass(frozen=True)
class ItemRecord:
    item_id: str
    title: str
    category: str
    description: str = ''
    cast: str = ''
    playtime_seconds: int = 0

    def __post_init__(self):
        if self.playtime_seconds < 0:
            raise ValueError(f'{self.item_id}: playtime_seconds must be non-negative, got {self.playtime_seconds}')
        if self.playtime_seconds >= MAX_PLAYTIME_SECONDS:
            raise ValueError(f'{self.item_id}: playtime_seconds must be < {MAX_PLAYTIME_SECONDS}, got {self.playtime_seconds}')

    @property
    def text(self) -> str:
        return ' '.join(part for part in (self.title, self.description, self.cast) if part)


@dataclass(frozen=True)
class LogEvent:
    user_id: str
    timestamp: int
    item_id: str
    domain: Domain


@dataclass
class UserHistory:
    user_id: str
    domain: Domain
    # (timestamp, item_id), timestamps non-decreasing
    events: list[tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        self.domain = Domain(self.domain)
        timestamps = [ts for ts, _ in self.events]
        if any(a > b for a, b in zip(timestamps, timestamps[1:])):
            raise ValueError(f'user {self.user_id}: timestamps must be non-decreasing')

    @property
    def item_ids(self) -> list[str]:
        return [item_id for _, item_id in self.events]

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class LabeledExample:
    '''A user history paired with a source-domain label item (None for unlabeled target examples).'''
    history: UserHistory
    label: str | None = None


class Catalog:
    '''Items of one domain, ordered by item_id; an item's position is its label index.'''
    def __init__(self, items: list[ItemRecord], domain: Domain | str):
        self.domain = Domain(domain)
        self.items: list[ItemRecord] = sorted(items, key=lambda item: item.item_id)
        self.index: dict[str, int] = {}
        for i, item in enumerate(self.items):
            if item.item_id in self.index:
                raise ValueError(f'duplicate item_id {item.item_id!r} in {self.domain} catalog')
            self.index[item.item_id] = i

    def __len__(self):
        return len(self.items)

    def __contains__(self, item_id: str):
        return item_id in self.index

    def __getitem__(self, item_id: str) -> ItemRecord:
        return self.items[self.index[item_id]]

    @property
    def item_ids(self) -> list[str]:
        return [item.item_id for item in self.items]


def read_catalog(file_path: str | Path, domain: Domain | str) -> Catalog:
    items = []
    with open(file_path, 'rb') as f:
        for line in f:
            if line.strip():
                items.append(ItemRecord(**orjson.loads(line)))
    return Catalog(items, domain)


def write_catalog(file_path: str | Path, catalog: Catalog):
    with open(file_path, 'wb') as f:
        for item in catalog.items:
            f.write(orjson.dumps(asdict(item)) + b'\n')


def read_logs(file_path: str | Path) -> list[LogEvent]:
    events = []
    with open(file_path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip('\n')
            if not line:
                continue
            parts = line.split('\t')
            if len(parts) != 4:
                raise ValueError(f'{file_path}:{line_no}: expected 4 tab-separated fields, got {len(parts)}')
            user_id, timestamp, item_id, domain = parts
            events.append(LogEvent(user_id, int(timestamp), item_id, Domain(domain)))
    return events


def write_logs(file_path: str | Path, events: list[LogEvent]):
    with open(file_path, 'w', encoding='utf-8') as f:
        for e in events:
            f.write(f'{e.user_id}\t{e.timestamp}\t{e.item_id}\t{e.domain}\n')


def group_histories(events: list[LogEvent], catalogs: dict[Domain, Catalog] | None = None) -> dict[str, dict[Domain, UserHistory]]:
    '''Groups events by user and domain, ordered by timestamp (stable for ties).'''
    grouped: dict[str, dict[Domain, list[tuple[int, str]]]] = defaultdict(lambda: defaultdict(list))
    for e in events:
        if catalogs is not None and e.item_id not in catalogs[e.domain]:
            raise KeyError(f'user {e.user_id}: item {e.item_id!r} is not in the {e.domain} catalog')
        grouped[e.user_id][e.domain].append((e.timestamp, e.item_id))
    return {
        user_id: {
            domain: UserHistory(user_id, domain, sorted(pairs, key=lambda pair: pair[0]))
            for domain, pairs in sorted(by_domain.items())
        }
        for user_id, by_domain in sorted(grouped.items())
    }


def source_examples(events: list[LogEvent], catalogs: dict[Domain, Catalog] | None = None) -> list[LabeledExample]:
    '''Labeled source examples: the last event of each source user is the label, the rest is the history.'''
    examples = []
    for user_id, by_domain in group_histories(events, catalogs).items():
        history = by_domain.get(Domain.SOURCE)
        if history is None or len(history) < 2:
            continue
        label_ts, label = history.events[-1]
        examples.append(LabeledExample(UserHistory(user_id, Domain.SOURCE, history.events[:-1]), label))
    if not examples:
        raise EmptyDataError('no labeled source examples, every source user needs at least 2 events')
    return examples


def target_examples(events: list[LogEvent], catalogs: dict[Domain, Catalog] | None = None) -> list[LabeledExample]:
    '''Unlabeled target examples: each target user's full history.'''
    examples = [
        LabeledExample(by_domain[Domain.TARGET])
        for by_domain in group_histories(events, catalogs).values()
        if Domain.TARGET in by_domain and len(by_domain[Domain.TARGET])
    ]
    if not examples:
        raise EmptyDataError('no target-domain histories found')
    return examples


def common_user_examples(events: list[LogEvent], catalogs: dict[Domain, Catalog] | None = None) -> list[LabeledExample]:
    '''Users of both services: the target history paired with the user's last source item as label.'''
    examples = []
    for by_domain in group_histories(events, catalogs).values():
        if Domain.TARGET in by_domain and Domain.SOURCE in by_domain:
            _, label = by_domain[Domain.SOURCE].events[-1]
            examples.append(LabeledExample(by_domain[Domain.TARGET], label))
    if not examples:
        raise EmptyDataError('no common users with both target history and a source label')
    return examples
