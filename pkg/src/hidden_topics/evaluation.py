"""Evaluation protocols: thresholded classification and ranked retrieval."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from hidden_topics.embeddings import EmbeddingStore
from hidden_topics.errors import DegenerateLabelsError, EmptyContentError
from hidden_topics.preprocess import text_to_matrix
from hidden_topics.relevance import document_summary_relevance
from hidden_topics.topics import DEFAULT_K, extract_topics

GRID_TOL = 1e-12


def classification_metrics(predictions: Sequence[bool], labels: Sequence[bool]) -> tuple[float, float, float]:
    """Precision, recall and F1 of the positive class; empty denominators give 0."""
    if len(predictions) != len(labels):
        raise ValueError(f"length mismatch: {len(predictions)} predictions, {len(labels)} labels")
    if len(labels) == 0:
        raise ValueError("no predictions")
    p = np.asarray(predictions, dtype=bool)
    y = np.asarray(labels, dtype=bool)
    tp = int(np.sum(p & y))
    fp = int(np.sum(p & ~y))
    fn = int(np.sum(~p & y))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def candidate_thresholds(scores: Sequence[float]) -> np.ndarray:
    """-inf, midpoints between adjacent distinct scores, +inf (ascending)."""
    v = np.unique(np.asarray(scores, dtype=np.float64))
    mids = v[:-1] + (v[1:] - v[:-1]) / 2
    return np.concatenate([[-math.inf], mids, [math.inf]])


def tune_threshold(scores: Sequence[float], labels: Sequence[bool]) -> float:
    """Threshold maximizing F1 when ``score > threshold`` predicts a match.

    Ties go to the lowest threshold.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=bool)
    if s.shape != y.shape or s.size == 0:
        raise ValueError("scores and labels must be nonempty and of equal length")
    if y.all() or not y.any():
        raise DegenerateLabelsError("threshold tuning needs both positive and negative labels")
    cands = candidate_thresholds(s)
    v = np.unique(s)
    # candidate j predicts positive exactly the scores >= v[j] (none for the last)
    pos_sorted = np.sort(s[y])
    all_sorted = np.sort(s)
    lows = np.concatenate([v, [math.inf]])
    tp = pos_sorted.size - np.searchsorted(pos_sorted, lows, side="left")
    predicted = all_sorted.size - np.searchsorted(all_sorted, lows, side="left")
    denom = predicted + pos_sorted.size
    f1 = np.where(tp > 0, 2.0 * tp / np.maximum(denom, 1), 0.0)
    return float(cands[int(np.argmax(f1))])


@dataclass(frozen=True)
class FoldResult:
    threshold: float
    precision: float
    recall: float
    f1: float
    tuning_size: int
    test_size: int


@dataclass(frozen=True)
class ClassificationStats:
    folds: tuple[FoldResult, ...]
    seed: int
    draws: int = 1

    def _values(self, name: str) -> np.ndarray:
        return np.array([getattr(f, name) for f in self.folds])

    def mean(self, name: str) -> float:
        return float(self._values(name).mean())

    def std(self, name: str) -> float:
        vals = self._values(name)
        return float(vals.std(ddof=1)) if vals.size > 1 else 0.0

    @property
    def precision(self) -> float:
        return self.mean("precision")

    @property
    def recall(self) -> float:
        return self.mean("recall")

    @property
    def f1(self) -> float:
        return self.mean("f1")

    def to_dict(self) -> dict:
        out: dict = {"seed": self.seed, "folds": len(self.folds), "draws": self.draws}
        for name in ("precision", "recall", "f1"):
            out[name] = {"mean": self.mean(name), "std": self.std(name)}
        out["per_fold"] = [
            {
                "threshold": f.threshold if math.isfinite(f.threshold) else str(f.threshold),
                "precision": f.precision,
                "recall": f.recall,
                "f1": f.f1,
                "tuning_size": f.tuning_size,
                "test_size": f.test_size,
            }
            for f in self.folds
        ]
        return out


def fold_splits(n: int, folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    return np.array_split(rng.permutation(n), folds)


def evaluate_fold(scores: np.ndarray, labels: np.ndarray, tuning: np.ndarray) -> FoldResult:
    """Tune on the ``tuning`` indices, test on every other index."""
    mask = np.zeros(scores.size, dtype=bool)
    mask[tuning] = True
    thr = tune_threshold(scores[mask], labels[mask])
    preds = scores[~mask] > thr
    p, r, f1 = classification_metrics(preds, labels[~mask])
    return FoldResult(thr, p, r, f1, int(mask.sum()), int((~mask).sum()))


def cross_validate(
    pairs: Iterable[tuple[float, bool]],
    folds: int = 10,
    seed: int = 0,
    max_draws: int = 100,
) -> ClassificationStats:
    """Repeated tune/test evaluation of a score threshold.

    The data is shuffled with ``seed`` and cut into ``folds`` parts. Each
    part in turn is the tuning set and the remaining parts are the test set.
    If any tuning part holds a single class the whole shuffle is redrawn, at
    most ``max_draws`` times.
    """
    data = list(pairs)
    if folds < 2:
        raise ValueError("need at least two folds")
    if len(data) < folds:
        raise ValueError(f"{len(data)} samples is fewer than {folds} folds")
    scores = np.array([float(s) for s, _ in data])
    labels = np.array([bool(y) for _, y in data])
    if labels.all() or not labels.any():
        raise DegenerateLabelsError("labels contain a single class")
    rng = np.random.default_rng(seed)
    for draw in range(1, max_draws + 1):
        parts = fold_splits(len(data), folds, rng)
        if all(labels[p].any() and not labels[p].all() for p in parts):
            break
    else:
        raise DegenerateLabelsError(
            f"no shuffle in {max_draws} draws gave every tuning fold both classes"
        )
    results = tuple(evaluate_fold(scores, labels, p) for p in parts)
    return ClassificationStats(results, seed, draw)


def precision_at_k(ranked_ids: Sequence, relevant_ids: Iterable, k: int) -> float:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > len(ranked_ids):
        raise ValueError(f"k={k} exceeds ranked list length {len(ranked_ids)}")
    relevant = set(relevant_ids)
    return sum(1 for d in ranked_ids[:k] if d in relevant) / k


def precision_histogram(per_query_precision: Mapping[str, float], k: int) -> list[float]:
    """Fraction of queries whose precision@k equals b/k, for b = 0..k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not per_query_precision:
        raise ValueError("no queries")
    counts = [0] * (k + 1)
    for qid, p in per_query_precision.items():
        b = round(p * k)
        if not 0 <= b <= k or abs(p - b / k) > GRID_TOL:
            raise ValueError(f"precision {p!r} of query {qid!r} is not a multiple of 1/{k}")
        counts[b] += 1
    total = len(per_query_precision)
    return [c / total for c in counts]


@dataclass(frozen=True)
class RankingStats:
    k: int
    per_query_precision: dict[str, float]
    histogram: list[float] = field(default_factory=list)

    @property
    def mean_precision(self) -> float:
        return float(np.mean(list(self.per_query_precision.values())))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mean_precision": self.mean_precision,
            "histogram": {f"{b}/{self.k}": frac for b, frac in enumerate(self.histogram)},
            "per_query_precision": dict(self.per_query_precision),
        }


@dataclass(frozen=True)
class RankedDocument:
    doc_id: str
    score: float
    flagged: bool = False  # document had no usable content


def rank_documents(
    summary_text: str,
    corpus: Mapping[str, str],
    store: EmbeddingStore,
    K: int = DEFAULT_K,
    stoplist: Iterable[str] = frozenset(),
    workers: int = 1,
    extract_options: Mapping[str, Any] | None = None,
) -> list[RankedDocument]:
    """Score every corpus document against one summary, best first.

    Ties are broken by ascending doc_id. Documents without usable content
    get score 0, are flagged, and sort after all others.
    """
    if not corpus:
        raise ValueError("empty corpus")
    stop = frozenset(stoplist)
    summary = text_to_matrix(summary_text, store, stop, side="summary")

    def score(item: tuple[str, str]) -> RankedDocument:
        doc_id, text = item
        try:
            doc = text_to_matrix(text, store, stop, side="document")
        except EmptyContentError:
            return RankedDocument(doc_id, 0.0, True)
        model = extract_topics(doc, K, **(extract_options or {}))
        return RankedDocument(doc_id, document_summary_relevance(model, summary).score)

    items = list(corpus.items())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            ranked = list(pool.map(score, items))
    else:
        ranked = [score(it) for it in items]
    ranked.sort(key=lambda r: (r.flagged, -r.score, r.doc_id))
    return ranked


def evaluate_ranking(
    categories: Sequence,
    corpus: Mapping[str, str],
    store: EmbeddingStore,
    ks: Sequence[int],
    K: int = DEFAULT_K,
    stoplist: Iterable[str] = frozenset(),
    workers: int = 1,
    extract_options: Mapping[str, Any] | None = None,
) -> dict[int, RankingStats]:
    """precision@k and k+1-bin histograms for each k, one query per category."""
    for k in ks:
        if k < 1 or k > len(corpus):
            raise ValueError(f"k={k} outside 1..{len(corpus)} (corpus size)")
    per_k: dict[int, dict[str, float]] = {k: {} for k in ks}
    for cat in categories:
        ranking = rank_documents(
            cat.summary_text, corpus, store, K, stoplist, workers, extract_options
        )
        ids = [r.doc_id for r in ranking]
        for k in ks:
            per_k[k][cat.category_id] = precision_at_k(ids, cat.relevant_doc_ids, k)
    return {
        k: RankingStats(k, per_k[k], precision_histogram(per_k[k], k)) for k in ks
    }
