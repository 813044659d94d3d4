"""Synthetic stores and corpora with known structure."""
from __future__ import annotations

import numpy as np

from hidden_topics.embeddings import EmbeddingStore


def two_cluster_store(rng: np.random.Generator, words_per_cluster: int = 20, dim_per_cluster: int = 24):
    """Two word clusters living in orthogonal coordinate blocks.

    Returns the store and the two token lists.
    """
    d = 2 * dim_per_cluster
    tokens_a = [f"alpha{i}" for i in range(words_per_cluster)]
    tokens_b = [f"beta{i}" for i in range(words_per_cluster)]
    vecs = np.zeros((2 * words_per_cluster, d))
    vecs[:words_per_cluster, :dim_per_cluster] = rng.normal(size=(words_per_cluster, dim_per_cluster))
    vecs[words_per_cluster:, dim_per_cluster:] = rng.normal(size=(words_per_cluster, dim_per_cluster))
    return EmbeddingStore(tokens_a + tokens_b, vecs), tokens_a, tokens_b


def sample_text(rng: np.random.Generator, tokens: list[str], n: int) -> str:
    return " ".join(rng.choice(tokens, size=n))


def random_matrix(rng: np.random.Generator, max_d: int = 8, max_n: int = 10) -> np.ndarray:
    d = int(rng.integers(1, max_d + 1))
    n = int(rng.integers(1, max_n + 1))
    return rng.normal(size=(d, n))
