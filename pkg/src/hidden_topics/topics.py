"""Hidden topic vectors of a document and their importances.

The topics are the orthonormal basis ``H`` (d x K) minimizing the total
squared error of reconstructing every word vector of the document by its
projection ``H H^T w``. They are the leading left singular vectors of the
word matrix ``W``; the importance of topic ``h`` is ``||h^T W||^2``, which
equals the corresponding squared singular value.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hidden_topics.errors import DimensionMismatchError
from hidden_topics.linalg import top_k_svd
from hidden_topics.linalg.svd import ORTHONORMALITY_TOL, RESIDUAL_TOL
from hidden_topics.preprocess import TokenMatrix

log = logging.getLogger(__name__)

DEFAULT_K = 15


@dataclass(frozen=True)
class TopicModel:
    topics: np.ndarray  # d x K, orthonormal columns
    raw_importance: np.ndarray
    norm_importance: np.ndarray
    effective_k: int
    frobenius_sq: float
    requested_k: int = 0

    @property
    def dim(self) -> int:
        return self.topics.shape[0]

    def projector(self) -> np.ndarray:
        return self.topics @ self.topics.T


def _normalize(raw: np.ndarray) -> np.ndarray:
    total = raw.sum()
    if total <= 0.0:
        # only reachable for an all-zero matrix, which build_matrix never emits
        return np.full(raw.shape, 1.0 / raw.size)
    return raw / total


def extract_topics(
    doc: TokenMatrix | np.ndarray,
    K: int = DEFAULT_K,
    *,
    orthonormality_tol: float = ORTHONORMALITY_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> TopicModel:
    """Extract the ``K`` most important hidden topics of a document.

    ``K`` is clamped to ``min(d, n)`` with a warning, so very short documents
    still produce a model.
    """
    W = doc.matrix if isinstance(doc, TokenMatrix) else np.asarray(doc, dtype=np.float64)
    svd = top_k_svd(W, K, orthonormality_tol=orthonormality_tol, residual_tol=residual_tol)
    if svd.clamped:
        log.warning("requested K=%d exceeds min(d, n)=%d; using %d topics", K, svd.k, svd.k)
    raw = svd.eigenvalues
    H = svd.left_vectors
    H.setflags(write=False)
    raw.setflags(write=False)
    norm = _normalize(raw)
    norm.setflags(write=False)
    return TopicModel(
        topics=H,
        raw_importance=raw,
        norm_importance=norm,
        effective_k=svd.k,
        frobenius_sq=float(np.sum(W * W)),
        requested_k=int(K),
    )


def reconstruct_word(model: TopicModel, w: np.ndarray) -> np.ndarray:
    """Projection ``H H^T w`` of a word vector onto the topic subspace."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (model.dim,):
        raise DimensionMismatchError(f"word vector has shape {w.shape}, model dim is {model.dim}")
    H = model.topics
    return H @ (H.T @ w)


def _matrix_of(doc: TokenMatrix | np.ndarray, model: TopicModel) -> np.ndarray:
    W = doc.matrix if isinstance(doc, TokenMatrix) else np.asarray(doc, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != model.dim:
        raise DimensionMismatchError(f"document has shape {W.shape}, model dim is {model.dim}")
    return W


def topic_reconstruction_error(model: TopicModel, doc: TokenMatrix | np.ndarray, k: int) -> float:
    """``||W - h_k h_k^T W||_F^2`` for the single topic ``k`` (1-based)."""
    if not 1 <= k <= model.effective_k:
        raise IndexError(f"topic index {k} outside 1..{model.effective_k}")
    W = _matrix_of(doc, model)
    h = model.topics[:, k - 1]
    R = W - np.outer(h, h @ W)
    return float(np.sum(R * R))


def word_errors(model: TopicModel, doc: TokenMatrix | np.ndarray) -> np.ndarray:
    """Per-column squared reconstruction error ``||w_i - H H^T w_i||^2``."""
    W = _matrix_of(doc, model)
    H = model.topics
    R = W - H @ (H.T @ W)
    return np.sum(R * R, axis=0)


def total_reconstruction_error(model: TopicModel, doc: TokenMatrix | np.ndarray) -> float:
    return float(word_errors(model, doc).sum())


def topic_words(model: TopicModel, doc: TokenMatrix, m: int = 10) -> list[tuple[str, float]]:
    """The ``m`` distinct document tokens best reconstructed by the topics.

    Sorted by ascending error, ties alphabetical.
    """
    if m < 1:
        raise ValueError("m must be positive")
    errs = word_errors(model, doc)
    best: dict[str, float] = {}
    for tok, err in zip(doc.tokens, errs):
        best.setdefault(tok, float(err))
    ranked = sorted(best.items(), key=lambda kv: (kv[1], kv[0]))
    return ranked[:m]


def dump_model(model: TopicModel, path: str | Path) -> None:
    """Write a model as text: header, importances, then topic rows (d x K)."""
    fmt = "{:.17g}".format
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{model.dim} {model.effective_k} {model.requested_k}\n")
        fh.write(fmt(model.frobenius_sq) + "\n")
        fh.write(" ".join(map(fmt, model.raw_importance)) + "\n")
        for row in model.topics:
            fh.write(" ".join(map(fmt, row)) + "\n")


def load_model(path: str | Path) -> TopicModel:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    dim, k, requested = (int(x) for x in lines[0].split())
    frob = float(lines[1])
    raw = np.array(lines[2].split(), dtype=np.float64)
    H = np.array([ln.split() for ln in lines[3 : 3 + dim]], dtype=np.float64).reshape(dim, k)
    if raw.shape != (k,):
        raise ValueError("importance count does not match K")
    return TopicModel(H, raw, _normalize(raw), k, frob, requested)
