import math

import numpy as np
import pytest

from crossrec.errors import EmptyDataError, SerializationError
from crossrec.features.vocabulary import Vocabulary, build_vocabulary, smooth_idf


DOCS = [
    ['drama', 'love', 'love'],
    ['drama', 'war'],
    ['comedy', 'love'],
    ['drama'],
]


def test_smooth_idf():
    np.testing.assert_allclose(smooth_idf(np.array([0, 3]), 3), [math.log(4.0) + 1.0, 1.0])


@pytest.mark.smoke
def test_terms_are_ranked_by_tfidf_mass():
    vocab = build_vocabulary(DOCS, capacity=10)
    # love: df=2, count=3; drama: df=3, count=3; war/comedy: df=1, count=1
    love = (math.log(5 / 3) + 1) * 3
    drama = (math.log(5 / 4) + 1) * 3
    assert love > drama
    assert vocab.terms == ('love', 'drama', 'comedy', 'war')
    np.testing.assert_array_equal(vocab.df, [2, 3, 1, 1])
    assert vocab.total_docs == 4


def test_capacity_truncates_the_ranking():
    vocab = build_vocabulary(DOCS, capacity=2)
    assert vocab.terms == ('love', 'drama')
    assert 'war' not in vocab
    assert len(vocab) == 2


def test_ties_break_lexicographically():
    vocab = build_vocabulary([['b'], ['a'], ['c']], capacity=3)
    assert vocab.terms == ('a', 'b', 'c')


def test_empty_corpus():
    with pytest.raises(EmptyDataError):
        build_vocabulary([], capacity=5)
    with pytest.raises(EmptyDataError):
        build_vocabulary([[], []], capacity=5)


def test_invalid_capacity():
    with pytest.raises(ValueError):
        build_vocabulary(DOCS, capacity=0)


def test_save_and_load(tmp_path):
    vocab = build_vocabulary(DOCS, capacity=3)
    vocab.save(tmp_path / 'vocab.tsv')
    loaded = Vocabulary.load(tmp_path / 'vocab.tsv')
    assert loaded == vocab
    np.testing.assert_array_equal(loaded.idf, vocab.idf)
    lines = (tmp_path / 'vocab.tsv').read_text().splitlines()
    assert lines[0] == '# total_docs=4\tcapacity=3'
    assert lines[1] == 'love\t0\t2'


def test_load_rejects_missing_header(tmp_path):
    (tmp_path / 'vocab.tsv').write_text('love\t0\t2\n')
    with pytest.raises(SerializationError):
        Vocabulary.load(tmp_path / 'vocab.tsv')


def test_load_rejects_out_of_order_indices(tmp_path):
    (tmp_path / 'vocab.tsv').write_text('# total_docs=2\tcapacity=2\nlove\t1\t2\n')
    with pytest.raises(SerializationError):
        Vocabulary.load(tmp_path / 'vocab.tsv')


def test_transform_matches_a_tfidf_vectorizer_fitted_on_the_corpus():
    from sklearn.feature_extraction.text import TfidfVectorizer
    vocab = build_vocabulary(DOCS, capacity=10)
    reference = TfidfVectorizer(analyzer=lambda doc: doc, lowercase=False, vocabulary=list(vocab.terms), smooth_idf=True, norm='l2')
    expected = reference.fit_transform(DOCS)
    np.testing.assert_allclose(vocab.idf, reference.idf_)
    np.testing.assert_allclose(vocab.transform(DOCS).toarray(), expected.toarray())
    # out-of-vocabulary and empty documents give zero rows
    np.testing.assert_array_equal(vocab.transform([['unknown'], []]).toarray(), np.zeros((2, len(vocab))))
