import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hidden_topics.embeddings import EmbeddingStore
from hidden_topics.errors import DimensionMismatchError, EmptyContentError
from hidden_topics.preprocess import TokenMatrix
from hidden_topics.relevance import (
    baseline_avg_cosine,
    document_summary_relevance,
    match_score,
    topic_summary_relevance,
    word_topic_relevance,
)
from hidden_topics.topics import extract_topics

from tests.synth import sample_text, two_cluster_store

E1 = np.array([1.0, 0.0])


def cols(*vs):
    return np.array(vs, dtype=float).T


def test_axis_projection():
    # s~ = (3, 0): s.s~ = 9, |s| = 5, |s~| = 3
    assert word_topic_relevance(E1, np.array([3.0, 4.0])) == 0.6


def test_orthogonal_word_is_zero():
    assert word_topic_relevance(E1, np.array([0.0, 2.0])) == 0.0


def test_antiparallel_word_is_one():
    assert word_topic_relevance(E1, np.array([-5.0, 0.0])) == 1.0


def test_word_relevance_errors():
    with pytest.raises(ValueError):
        word_topic_relevance(E1, np.zeros(2))
    with pytest.raises(ValueError):
        word_topic_relevance(np.array([2.0, 0.0]), np.ones(2))
    with pytest.raises(DimensionMismatchError):
        word_topic_relevance(E1, np.ones(3))


def test_word_relevance_is_abs_cosine(rng):
    for _ in range(200):
        h = rng.normal(size=5)
        h /= np.linalg.norm(h)
        s = rng.normal(size=5)
        expected = abs(h @ s) / np.linalg.norm(s)
        assert word_topic_relevance(h, s) == pytest.approx(expected, abs=1e-12)


def test_topic_summary_mean():
    s = np.array([3.0, 4.0])
    assert topic_summary_relevance(E1, s[:, None]) == word_topic_relevance(E1, s)
    assert topic_summary_relevance(E1, cols((3, 4), (0, 2))) == pytest.approx(0.3, abs=1e-15)
    assert topic_summary_relevance(E1, cols((0, 2), (3, 4))) == pytest.approx(0.3, abs=1e-15)


def test_topic_summary_empty():
    with pytest.raises(EmptyContentError):
        topic_summary_relevance(E1, np.zeros((2, 0)))


def test_single_topic_score():
    model = extract_topics(cols((2, 0), (1, 0)), K=1)
    report = document_summary_relevance(model, cols((3, 4)))
    assert report.score == pytest.approx(0.6, abs=1e-12)
    assert report.score == pytest.approx(topic_summary_relevance(model.topics[:, 0], cols((3, 4))), abs=1e-15)


def test_orthogonal_summary_scores_zero():
    model = extract_topics(cols((2, 0, 0), (1, 1, 0)), K=2)
    assert document_summary_relevance(model, cols((0, 0, 3), (0, 0, -1))).score == 0.0


def test_dimension_mismatch():
    model = extract_topics(cols((2, 0), (1, 0)), K=1)
    with pytest.raises(DimensionMismatchError):
        document_summary_relevance(model, cols((1, 0, 0)))


def test_report_matches_scalar_path(rng):
    W = rng.normal(size=(6, 12))
    S = rng.normal(size=(6, 4))
    model = extract_topics(W, K=4)
    report = document_summary_relevance(model, S)
    scalar = [topic_summary_relevance(h, S) for h in model.topics.T]
    np.testing.assert_allclose(report.per_topic, scalar, atol=1e-12)
    assert report.score == pytest.approx(float(np.dot(model.norm_importance, report.per_topic)), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.floats(1e-3, 1e3))
def test_sign_and_scale_invariance(seed, c):
    rng = np.random.default_rng(seed)
    W = rng.normal(size=(5, 9))
    S = rng.normal(size=(5, 3))
    model = extract_topics(W, K=3)
    base = document_summary_relevance(model, S)
    assert np.all((base.per_topic >= 0) & (base.per_topic <= 1))
    flipped = type(model)(
        topics=model.topics * np.array([-1.0, 1.0, -1.0]),
        raw_importance=model.raw_importance,
        norm_importance=model.norm_importance,
        effective_k=model.effective_k,
        frobenius_sq=model.frobenius_sq,
    )
    assert np.array_equal(document_summary_relevance(flipped, S).per_topic, base.per_topic)
    scaled = document_summary_relevance(model, S * c)
    np.testing.assert_allclose(scaled.per_topic, base.per_topic, rtol=1e-12, atol=1e-15)


def test_match_score_single_word():
    store = EmbeddingStore.from_mapping({"gene": (0.3, -1.2, 0.5)})
    assert match_score("gene", "gene", store) == pytest.approx(1.0, abs=1e-12)


def test_match_score_orthogonal_axes():
    store = EmbeddingStore.from_mapping(
        {"rain": (1.0, 0.0, 0.0), "storm": (2.0, 0.0, 0.0), "dna": (0.0, 1.0, 0.0)}
    )
    assert match_score("rain storm rain", "dna dna", store) == 0.0


def test_match_score_empty_sides():
    store = EmbeddingStore.from_mapping({"gene": (1.0, 0.0)})
    with pytest.raises(EmptyContentError) as err:
        match_score("unknown words", "gene", store)
    assert err.value.side == "document"
    with pytest.raises(EmptyContentError) as err:
        match_score("gene", "unknown", store)
    assert err.value.side == "summary"


def test_match_score_cluster_separation(rng):
    store, a, b = two_cluster_store(rng)
    for _ in range(10):
        doc = sample_text(rng, a, 80)
        in_score = match_score(doc, sample_text(rng, a, 8), store)
        out_score = match_score(doc, sample_text(rng, b, 8), store)
        assert in_score > out_score
        assert out_score == 0.0


def test_document_scale_invariance(rng):
    store, a, _ = two_cluster_store(rng)
    doc = sample_text(rng, a, 60)
    summary = sample_text(rng, a, 6)
    base = match_score(doc, summary, store)
    scaled = EmbeddingStore(store.tokens, store.matrix * 7.5)
    assert match_score(doc, summary, scaled) == pytest.approx(base, abs=1e-10)


def test_baseline_avg_cosine(rng):
    D = cols((1, 2, 0), (0, 1, 1))
    assert baseline_avg_cosine(D, D) == pytest.approx(1.0, abs=1e-15)
    assert baseline_avg_cosine(cols((1, 0)), cols((0, 3))) == 0.0
    assert baseline_avg_cosine(cols((1, 0), (-1, 0)), cols((0, 3))) == 0.0
    for _ in range(20):
        A = rng.normal(size=(4, 5))
        B = rng.normal(size=(4, 3))
        a, b = A.mean(axis=1), B.mean(axis=1)
        expected = a @ b / np.linalg.norm(a) / np.linalg.norm(b)
        got = baseline_avg_cosine(TokenMatrix(A, tuple("abcde")), B)
        assert got == pytest.approx(expected, abs=1e-12)
