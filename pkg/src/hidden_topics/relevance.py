"""Relevance of a summary to a document's hidden topics.

Each summary word is projected onto each topic; the word-topic relevance is
the cosine between the word and its projection. Averaging over summary
words gives a topic-summary relevance, and the importance-weighted sum over
topics gives the document-summary score in [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

import numpy as np

from hidden_topics.embeddings import EmbeddingStore
from hidden_topics.errors import DimensionMismatchError, EmptyContentError
from hidden_topics.preprocess import TokenMatrix, text_to_matrix
from hidden_topics.topics import DEFAULT_K, TopicModel, extract_topics

UNIT_TOL = 1e-8
# projections shorter than this fraction of the word norm count as orthogonal
ORTHOGONAL_TOL = 1e-12


@dataclass(frozen=True)
class RelevanceReport:
    per_topic: np.ndarray
    score: float
    effective_k: int
    norm_importance: np.ndarray

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "effective_k": self.effective_k,
            "per_topic": [float(x) for x in self.per_topic],
            "importance": [float(x) for x in self.norm_importance],
        }


def word_topic_relevance(h: np.ndarray, s: np.ndarray) -> float:
    """Cosine between ``s`` and its projection ``h h^T s`` onto unit vector ``h``.

    Returns 0 when the projection vanishes. Analytically this is
    ``|cos(h, s)|``.
    """
    h = np.asarray(h, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if h.shape != s.shape:
        raise DimensionMismatchError(f"topic shape {h.shape} vs word shape {s.shape}")
    s_norm = float(np.linalg.norm(s))
    if s_norm == 0.0:
        raise ValueError("summary word vector is zero")
    if abs(float(np.linalg.norm(h)) - 1.0) > UNIT_TOL:
        raise ValueError("topic vector is not unit length")
    s_rec = h * float(h @ s)
    rec_norm = float(np.linalg.norm(s_rec))
    if rec_norm < ORTHOGONAL_TOL * s_norm:
        return 0.0
    return min(float(s @ s_rec) / (s_norm * rec_norm), 1.0)


def _word_topic_matrix(H: np.ndarray, S: np.ndarray) -> np.ndarray:
    """K x m matrix of word-topic relevances, vectorized form of the above."""
    proj = H.T @ S  # h_k^T s_j
    s_norm = np.linalg.norm(S, axis=0)
    if np.any(s_norm == 0.0):
        raise ValueError("summary contains a zero word vector")
    # ||h h^T s|| = |h^T s| for unit h, and s^T h h^T s = (h^T s)^2
    rec_norm = np.abs(proj) * np.linalg.norm(H, axis=0)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = proj * proj / (s_norm[None, :] * rec_norm)
    rel = np.where(rec_norm < ORTHOGONAL_TOL * s_norm[None, :], 0.0, rel)
    return np.minimum(rel, 1.0)


def _summary_columns(S: TokenMatrix | np.ndarray) -> np.ndarray:
    M = S.matrix if isinstance(S, TokenMatrix) else np.asarray(S, dtype=np.float64)
    if M.ndim == 1:
        M = M[:, None]
    if M.shape[1] == 0:
        raise EmptyContentError("summary is empty", side="summary")
    return M


def topic_summary_relevance(h: np.ndarray, S: TokenMatrix | np.ndarray) -> float:
    """Mean word-topic relevance of ``h`` over the summary's words."""
    M = _summary_columns(S)
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (M.shape[0],):
        raise DimensionMismatchError(f"topic shape {h.shape} vs summary dim {M.shape[0]}")
    if abs(float(np.linalg.norm(h)) - 1.0) > UNIT_TOL:
        raise ValueError("topic vector is not unit length")
    return float(_word_topic_matrix(h[:, None], M)[0].mean())


def document_summary_relevance(model: TopicModel, S: TokenMatrix | np.ndarray) -> RelevanceReport:
    """Importance-weighted topic-summary relevance."""
    M = _summary_columns(S)
    if M.shape[0] != model.dim:
        raise DimensionMismatchError(f"summary dim {M.shape[0]} vs model dim {model.dim}")
    per_topic = _word_topic_matrix(model.topics, M).mean(axis=1)
    score = float(np.dot(model.norm_importance, per_topic))
    per_topic.setflags(write=False)
    return RelevanceReport(per_topic, score, model.effective_k, model.norm_importance)


def match(
    doc_text: str,
    summary_text: str,
    store: EmbeddingStore,
    K: int = DEFAULT_K,
    stoplist: Iterable[str] = frozenset(),
    extract_options: Mapping[str, Any] | None = None,
) -> tuple[RelevanceReport, TokenMatrix, TokenMatrix, TopicModel]:
    """Full pipeline, returning the report and its intermediates.

    ``extract_options`` are passed through to :func:`extract_topics`.
    """
    doc = text_to_matrix(doc_text, store, stoplist, side="document")
    summary = text_to_matrix(summary_text, store, stoplist, side="summary")
    model = extract_topics(doc, K, **(extract_options or {}))
    return document_summary_relevance(model, summary), doc, summary, model


def match_score(
    doc_text: str,
    summary_text: str,
    store: EmbeddingStore,
    K: int = DEFAULT_K,
    stoplist: Iterable[str] = frozenset(),
    extract_options: Mapping[str, Any] | None = None,
) -> float:
    """Relevance score in [0, 1] of ``summary_text`` to ``doc_text``."""
    return match(doc_text, summary_text, store, K, stoplist, extract_options)[0].score


def baseline_avg_cosine(doc: TokenMatrix | np.ndarray, S: TokenMatrix | np.ndarray) -> float:
    """Cosine between the mean document vector and the mean summary vector."""
    D = doc.matrix if isinstance(doc, TokenMatrix) else np.asarray(doc, dtype=np.float64)
    M = _summary_columns(S)
    if D.ndim != 2 or D.shape[1] == 0:
        raise EmptyContentError("document is empty", side="document")
    if D.shape[0] != M.shape[0]:
        raise DimensionMismatchError(f"document dim {D.shape[0]} vs summary dim {M.shape[0]}")
    a = D.mean(axis=1)
    b = M.mean(axis=1)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))
