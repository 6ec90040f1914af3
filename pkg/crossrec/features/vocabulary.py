from __future__ import annotations

from pathlib import Path
from functools import cached_property
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from sklearn.feature_extraction.text import CountVectorizer, TfidfTransformer

from crossrec.errors import EmptyDataError, SerializationError


def _df_pattern(df: np.ndarray, total_docs: int) -> sparse.csr_matrix:
    '''binary (total_docs x V) matrix whose column j is non-zero in its first df[j] rows'''
    df = np.asarray(df, dtype=np.int64)
    cols = np.repeat(np.arange(df.size), df)
    rows = np.arange(cols.size) - np.repeat(np.cumsum(df) - df, df)
    data = np.ones(cols.size, dtype=np.float64)
    return sparse.csr_matrix((data, (rows, cols)), shape=(total_docs, df.size))


def fit_tfidf_transformer(df: np.ndarray, total_docs: int) -> TfidfTransformer:
    '''TfidfTransformer(smooth_idf=True, norm='l2') fitted from document frequencies alone'''
    if np.any(np.asarray(df) > total_docs):
        raise ValueError(f'document frequencies cannot exceed total_docs={total_docs}')
    return TfidfTransformer(norm='l2', use_idf=True, smooth_idf=True).fit(_df_pattern(df, total_docs))


def smooth_idf(df: np.ndarray, total_docs: int) -> np.ndarray:
    '''idf = ln((1+N)/(1+df)) + 1'''
    return fit_tfidf_transformer(df, total_docs).idf_


def _identity_analyzer(tokens: list[str]) -> list[str]:
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    # terms in index order, highest-ranked first
    terms: tuple[str, ...]
    df: np.ndarray
    total_docs: int
    capacity: int
    term_to_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        assert len(self.terms) <= self.capacity, f'{len(self.terms)} terms exceed capacity {self.capacity}'
        assert len(self.terms) == len(self.df), 'terms and df must have the same length'
        object.__setattr__(self, 'term_to_index', {term: i for i, term in enumerate(self.terms)})

    @cached_property
    def counter(self) -> CountVectorizer:
        # a fixed vocabulary needs no fit
        return CountVectorizer(vocabulary=list(self.terms), analyzer=_identity_analyzer, lowercase=False)

    @cached_property
    def transformer(self) -> TfidfTransformer:
        return fit_tfidf_transformer(self.df, self.total_docs)

    @property
    def idf(self) -> np.ndarray:
        return self.transformer.idf_

    def transform(self, documents: list[list[str]]) -> sparse.csr_matrix:
        '''L2-normalized tf·idf rows; out-of-vocabulary tokens are dropped, empty documents give zero rows.'''
        return self.transformer.transform(self.counter.transform(documents)).tocsr()

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term: str):
        return term in self.term_to_index

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.terms == other.terms
            and self.total_docs == other.total_docs
            and self.capacity == other.capacity
            and np.array_equal(self.df, other.df)
        )

    def save(self, file_path: str | Path):
        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(f'# total_docs={self.total_docs}\tcapacity={self.capacity}\n')
            for i, (term, df) in enumerate(zip(self.terms, self.df)):
                f.write(f'{term}\t{i}\t{int(df)}\n')

    @classmethod
    def load(cls, file_path: str | Path) -> Vocabulary:
        with open(file_path, 'r', encoding='utf-8') as f:
            header = f.readline().rstrip('\n')
            if not header.startswith('# '):
                raise SerializationError(f'{file_path}: missing "# total_docs=..." header')
            meta = dict(part.split('=', 1) for part in header[2:].split('\t'))
            terms, dfs = [], []
            for line_no, line in enumerate(f, start=2):
                term, index, df = line.rstrip('\n').split('\t')
                if int(index) != len(terms):
                    raise SerializationError(f'{file_path}:{line_no}: expected index {len(terms)}, got {index}')
                terms.append(term)
                dfs.append(int(df))
        return cls(tuple(terms), np.array(dfs, dtype=np.int64), int(meta['total_docs']), int(meta['capacity']))


def build_vocabulary(documents: list[list[str]], capacity: int) -> Vocabulary:
    '''Keeps the `capacity` terms with the highest tf-idf mass over the corpus.

    A term's score is Σ_docs tf·idf = idf · (total count), ties broken lexicographically.
    '''
    if capacity < 1:
        raise ValueError(f'capacity must be >= 1, got {capacity}')
    if not documents:
        raise EmptyDataError('cannot build a vocabulary from an empty corpus')
    vectorizer = CountVectorizer(analyzer=_identity_analyzer, lowercase=False)
    try:
        counts = vectorizer.fit_transform(documents).tocsc()
    except ValueError as err:
        # sklearn raises when every document is empty
        raise EmptyDataError(f'cannot build a vocabulary: {err}') from err
    # get_feature_names_out() is sorted, so column order is the lexicographic tie-break
    all_terms = vectorizer.get_feature_names_out()
    df = np.diff(counts.indptr)
    total_counts = np.asarray(counts.sum(axis=0)).ravel()
    total_docs = len(documents)
    idf = TfidfTransformer(norm=None, smooth_idf=True).fit(counts).idf_
    scores = idf * total_counts
    order = np.lexsort((np.arange(len(all_terms)), -scores))[:capacity]
    return Vocabulary(
        terms=tuple(str(all_terms[i]) for i in order),
        df=df[order].astype(np.int64),
        total_docs=total_docs,
        capacity=capacity,
    )
