"""Text -> content-word tokens -> d x n matrix of word vectors."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from hidden_topics.embeddings import EmbeddingStore
from hidden_topics.errors import EmptyContentError

_SPLIT = re.compile(r"[\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop purely numeric tokens."""
    return [t for t in _SPLIT.split(text.lower()) if t and not t.isnumeric()]


def remove_stopwords(tokens: Iterable[str], stoplist: Iterable[str]) -> list[str]:
    stop = stoplist if isinstance(stoplist, (set, frozenset)) else frozenset(stoplist)
    return [t for t in tokens if t not in stop]


def parse_stoplist(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def load_stoplist(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return parse_stoplist(fh)


def default_stoplist() -> frozenset[str]:
    """Bundled English stopwords plus prepositions."""
    text = resources.files("hidden_topics").joinpath("data/stopwords.txt").read_text("utf-8")
    return parse_stoplist(text.splitlines())


@dataclass(frozen=True)
class TokenMatrix:
    """Word vectors stacked as columns, with the token behind each column.

    ``oov`` counts input tokens dropped because they had no usable vector
    (absent from the store, or stored as the zero vector).
    """

    matrix: np.ndarray
    tokens: tuple[str, ...]
    oov: int = 0
    oov_tokens: tuple[str, ...] = field(default=(), repr=False)

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[1] != len(self.tokens):
            raise ValueError("column count must equal token count")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


# The document side and the summary side share one representation.
DocumentMatrix = TokenMatrix
SummaryMatrix = TokenMatrix


def build_matrix(tokens: Iterable[str], store: EmbeddingStore, side: str = "document") -> TokenMatrix:
    """Stack the vectors of in-vocabulary tokens as columns, in input order.

    Repeated tokens give repeated columns. Raises :class:`EmptyContentError`
    when nothing survives.
    """
    kept: list[str] = []
    cols: list[np.ndarray] = []
    missing: list[str] = []
    for tok in tokens:
        vec = store.get(tok)
        if vec is None or not np.any(vec):
            missing.append(tok)
            continue
        kept.append(tok)
        cols.append(vec)
    if not cols:
        raise EmptyContentError(f"{side} has no in-vocabulary content words", side=side)
    W = np.column_stack(cols)
    W.setflags(write=False)
    return TokenMatrix(W, tuple(kept), len(missing), tuple(missing))


def text_to_matrix(
    text: str, store: EmbeddingStore, stoplist: Iterable[str], side: str = "document"
) -> TokenMatrix:
    return build_matrix(remove_stopwords(tokenize(text), stoplist), store, side=side)
