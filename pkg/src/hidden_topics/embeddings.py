"""Pre-trained word vectors: loading, validation, and lookup."""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from hidden_topics.errors import (
    ComponentCountError,
    EmptyFileError,
    EntryCountError,
    HeaderError,
    NonFiniteValueError,
)

log = logging.getLogger(__name__)


class EmbeddingStore:
    """Immutable token -> vector map backed by one read-only matrix."""

    def __init__(self, tokens: Iterable[str], vectors: np.ndarray, duplicates: int = 0):
        tokens = list(tokens)
        vectors = np.array(vectors, dtype=np.float64, copy=True)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError("need one vector row per token")
        if vectors.shape[1] < 1:
            raise ValueError("embedding dimension must be positive")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding vectors must be finite")
        index: dict[str, int] = {}
        for i, tok in enumerate(tokens):
            if not isinstance(tok, str) or not tok:
                raise ValueError(f"invalid token {tok!r}")
            if tok in index:
                raise ValueError(f"duplicate token {tok!r}")
            index[tok] = i
        vectors.setflags(write=False)
        self._index = index
        self._vectors = vectors
        self.duplicates = duplicates

    @classmethod
    def from_mapping(cls, vocab: Mapping[str, Iterable[float]]) -> "EmbeddingStore":
        tokens = list(vocab)
        return cls(tokens, np.array([list(vocab[t]) for t in tokens], dtype=np.float64))

    @property
    def dim(self) -> int:
        return self._vectors.shape[1]

    @property
    def tokens(self) -> list[str]:
        return list(self._index)

    @property
    def matrix(self) -> np.ndarray:
        """All vectors as rows, in token order (read-only)."""
        return self._vectors

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, token: object) -> bool:
        return token in self._index

    def get(self, token: str) -> np.ndarray | None:
        i = self._index.get(token)
        return None if i is None else self._vectors[i]

    def __repr__(self) -> str:
        return f"EmbeddingStore(dim={self.dim}, size={len(self)})"


def lookup(store: EmbeddingStore, token: str) -> np.ndarray | None:
    """Vector for ``token``, or None when it is out of vocabulary.

    The returned array is a read-only view into the store.
    """
    return store.get(token)


def _parse_header(line: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise HeaderError("header must be 'vocab_count dim'", line=1)
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise HeaderError(f"non-integer header {line.strip()!r}", line=1) from None
    if count < 0 or dim < 1:
        raise HeaderError(f"invalid header counts {count} {dim}", line=1)
    return count, dim


def load_embeddings(path: str | Path, format: str = "text") -> EmbeddingStore:
    """Load word vectors from a whitespace-separated text file.

    The first line holds ``vocab_count dim``; each following line is a token
    and ``dim`` floats. Duplicate tokens keep their first vector; the number
    dropped is logged and stored on ``EmbeddingStore.duplicates``.
    """
    if format != "text":
        raise ValueError(f"unsupported embedding format {format!r}")
    with open(path, encoding="utf-8", newline=None) as fh:
        header = fh.readline()
        if not header.strip():
            raise EmptyFileError("empty embedding file", line=1)
        count, dim = _parse_header(header)
        tokens: list[str] = []
        seen: set[str] = set()
        rows = np.empty((count, dim), dtype=np.float64)
        entries = 0
        duplicates = 0
        lineno = 1
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise ComponentCountError(
                    f"expected {dim} components, got {len(parts) - 1}", line=lineno
                )
            if entries >= count:
                raise EntryCountError(f"more entries than the declared {count}", line=lineno)
            try:
                values = [float(x) for x in parts[1:]]
            except ValueError:
                raise ComponentCountError("non-numeric component", line=lineno) from None
            if not all(math.isfinite(v) for v in values):
                raise NonFiniteValueError("non-finite component", line=lineno)
            entries += 1
            tok = parts[0]
            if tok in seen:
                duplicates += 1
                continue
            seen.add(tok)
            rows[len(tokens)] = values
            tokens.append(tok)
    if entries != count:
        raise EntryCountError(f"declared {count} entries, found {entries}", line=lineno)
    if duplicates:
        log.warning("%s: %d duplicate tokens ignored", path, duplicates)
    return EmbeddingStore(tokens, rows[: len(tokens)], duplicates=duplicates)


def save_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    """Write ``store`` in the text format read by :func:`load_embeddings`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(store)} {store.dim}\n")
        for tok, row in zip(store.tokens, store.matrix):
            fh.write(tok + " " + " ".join(repr(float(x)) for x in row) + "\n")
