from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.features.records import ItemRecord, UserHistory, Catalog
    from crossrec.features.tokenizer import Tokenizer

import math
from pathlib import Path
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from crossrec.enums import Domain
from crossrec.errors import ShapeMismatchError
from crossrec.features.vocabulary import Vocabulary, build_vocabulary
from crossrec.features.tokenizer import simple_tokenize
from crossrec.utils.utils import load_yaml_file, dump_yaml_file


USER_VOCAB_FILENAME = 'user_vocab.tsv'
ITEM_VOCAB_FILENAME = 'item_vocab.tsv'
FEATURES_FILENAME = 'features.yml'


@dataclass(frozen=True)
class SparseVec:
    dim: int
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.float64))

    def __post_init__(self):
        if self.indices.shape != self.values.shape:
            raise ShapeMismatchError(f'indices {self.indices.shape} and values {self.values.shape} differ')
        if self.indices.size:
            assert np.all(np.diff(self.indices) > 0), 'indices must be strictly increasing'
            assert self.indices[0] >= 0 and self.indices[-1] < self.dim, f'indices must be in [0, {self.dim})'
            assert np.all(np.isfinite(self.values)), 'weights must be finite'

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def to_dense(self, dtype=np.float64) -> np.ndarray:
        out = np.zeros(self.dim, dtype=dtype)
        out[self.indices] = self.values
        return out

    @staticmethod
    def concat(blocks: list[SparseVec]) -> SparseVec:
        offset, indices, values = 0, [], []
        for block in blocks:
            indices.append(block.indices + offset)
            values.append(block.values)
            offset += block.dim
        return SparseVec(offset, np.concatenate(indices).astype(np.int64), np.concatenate(values))

    @staticmethod
    def one_hot(dim: int, index: int | None) -> SparseVec:
        if index is None:
            return SparseVec(dim)
        return SparseVec(dim, np.array([index], dtype=np.int64), np.array([1.0]))


def to_csr(vectors: list[SparseVec], dim: int | None = None) -> sparse.csr_matrix:
    '''Stacks vectors into an (n x dim) CSR matrix.'''
    if dim is None:
        if not vectors:
            raise ValueError('dim is required for an empty list of vectors')
        dim = vectors[0].dim
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        if vec.dim != dim:
            raise ShapeMismatchError(f'vector {i} has dim {vec.dim}, expected {dim}')
        indptr[i + 1] = indptr[i] + vec.indices.size
    indices = np.concatenate([vec.indices for vec in vectors]) if vectors else np.zeros(0, dtype=np.int64)
    values = np.concatenate([vec.values for vec in vectors]) if vectors else np.zeros(0)
    return sparse.csr_matrix((values, indices, indptr), shape=(len(vectors), dim))


def vectorize_text(tokens: list[str], vocab: Vocabulary) -> SparseVec:
    '''tf·idf over in-vocabulary tokens, L2-normalized; out-of-vocabulary tokens are dropped.'''
    row = vocab.transform([tokens])
    row.sort_indices()
    return SparseVec(len(vocab), row.indices.astype(np.int64), row.data.astype(np.float64))


@dataclass(frozen=True)
class PlaytimeBuckets:
    hours: int = 24
    minutes: int = 60
    seconds: int = 60

    @property
    def dim(self) -> int:
        return self.hours + self.minutes + self.seconds

    def encode(self, playtime_seconds: int) -> list[SparseVec]:
        if playtime_seconds < 0:
            raise ValueError(f'playtime_seconds must be non-negative, got {playtime_seconds}')
        hour, rest = divmod(int(playtime_seconds), 3600)
        minute, second = divmod(rest, 60)
        # NOTE: playtimes past the last hour bucket land in it
        return [
            SparseVec.one_hot(self.hours, min(hour, self.hours - 1)),
            SparseVec.one_hot(self.minutes, min(minute, self.minutes - 1)),
            SparseVec.one_hot(self.seconds, min(second, self.seconds - 1)),
        ]


def vectorize_item(
    item: ItemRecord,
    text_vocab: Vocabulary,
    category_set: list[str],
    playtime_buckets: PlaytimeBuckets | None = None,
    tokenizer: Tokenizer = simple_tokenize,
) -> SparseVec:
    '''[text tf-idf | category one-hot | hour one-hot | minute one-hot | second one-hot]'''
    playtime_buckets = playtime_buckets or PlaytimeBuckets()
    if item.playtime_seconds < 0:
        raise ValueError(f'{item.item_id}: playtime_seconds must be non-negative, got {item.playtime_seconds}')
    category_index = category_set.index(item.category) if item.category in category_set else None
    return SparseVec.concat([
        vectorize_text(tokenizer(item.text), text_vocab),
        SparseVec.one_hot(len(category_set), category_index),
        *playtime_buckets.encode(item.playtime_seconds),
    ])


def item_dim(text_vocab: Vocabulary, category_set: list[str], playtime_buckets: PlaytimeBuckets) -> int:
    return len(text_vocab) + len(category_set) + playtime_buckets.dim


class FeatureSpace:
    '''The fitted vocabularies and one-hot layouts that turn users and items into model inputs.

    User documents are the concatenated text fields of every item in the history,
    looked up in the catalog of the history's domain.
    '''
    def __init__(
        self,
        user_vocab: Vocabulary,
        item_vocab: Vocabulary,
        categories: list[str],
        playtime_buckets: PlaytimeBuckets | None = None,
        tokenizer: Tokenizer = simple_tokenize,
    ):
        self.user_vocab = user_vocab
        self.item_vocab = item_vocab
        self.categories = list(categories)
        self.playtime_buckets = playtime_buckets or PlaytimeBuckets()
        self.tokenizer = tokenizer

    @property
    def user_dim(self) -> int:
        return len(self.user_vocab)

    @property
    def item_dim(self) -> int:
        return item_dim(self.item_vocab, self.categories, self.playtime_buckets)

    @classmethod
    def fit(
        cls,
        histories: list[UserHistory],
        catalogs: dict[Domain, Catalog],
        user_capacity: int,
        item_capacity: int,
        playtime_buckets: PlaytimeBuckets | None = None,
        tokenizer: Tokenizer = simple_tokenize,
    ) -> FeatureSpace:
        '''Fits the user vocabulary on training histories and the item vocabulary on the source catalog.'''
        source_catalog = catalogs[Domain.SOURCE]
        user_docs = [user_tokens(history, catalogs, tokenizer) for history in histories]
        item_docs = [tokenizer(item.text) for item in source_catalog.items]
        categories = sorted({item.category for item in source_catalog.items})
        return cls(
            user_vocab=build_vocabulary(user_docs, user_capacity),
            item_vocab=build_vocabulary(item_docs, item_capacity),
            categories=categories,
            playtime_buckets=playtime_buckets,
            tokenizer=tokenizer,
        )

    def user_vector(self, history: UserHistory, catalogs: dict[Domain, Catalog]) -> SparseVec:
        return vectorize_text(user_tokens(history, catalogs, self.tokenizer), self.user_vocab)

    def user_matrix(self, histories: list[UserHistory], catalogs: dict[Domain, Catalog]) -> sparse.csr_matrix:
        if not histories:
            return sparse.csr_matrix((0, self.user_dim), dtype=np.float64)
        return self.user_vocab.transform([user_tokens(history, catalogs, self.tokenizer) for history in histories])

    def item_vector(self, item: ItemRecord) -> SparseVec:
        return vectorize_item(item, self.item_vocab, self.categories, self.playtime_buckets, self.tokenizer)

    def item_matrix(self, catalog: Catalog) -> sparse.csr_matrix:
        return to_csr([self.item_vector(item) for item in catalog.items], dim=self.item_dim)

    def save(self, dir_path: str | Path):
        dir_path = Path(dir_path)
        dir_path.mkdir(parents=True, exist_ok=True)
        self.user_vocab.save(dir_path / USER_VOCAB_FILENAME)
        self.item_vocab.save(dir_path / ITEM_VOCAB_FILENAME)
        dump_yaml_file(dir_path / FEATURES_FILENAME, {
            'categories': self.categories,
            'playtime_buckets': {
                'hours': self.playtime_buckets.hours,
                'minutes': self.playtime_buckets.minutes,
                'seconds': self.playtime_buckets.seconds,
            },
        })

    @classmethod
    def load(cls, dir_path: str | Path) -> FeatureSpace:
        dir_path = Path(dir_path)
        meta = load_yaml_file(dir_path / FEATURES_FILENAME)
        return cls(
            user_vocab=Vocabulary.load(dir_path / USER_VOCAB_FILENAME),
            item_vocab=Vocabulary.load(dir_path / ITEM_VOCAB_FILENAME),
            categories=meta['categories'],
            playtime_buckets=PlaytimeBuckets(**meta['playtime_buckets']),
        )


def user_tokens(history: UserHistory, catalogs: dict[Domain, Catalog], tokenizer: Tokenizer = simple_tokenize) -> list[str]:
    catalog = catalogs[history.domain]
    tokens: list[str] = []
    for item_id in history.item_ids:
        tokens.extend(tokenizer(catalog[item_id].text))
    return tokens


def is_unit_or_zero(vec: SparseVec, tol: float = 1e-9) -> bool:
    norm = vec.norm
    return norm == 0.0 or math.isclose(norm, 1.0, abs_tol=tol)
