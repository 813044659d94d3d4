"""Top-K left singular vectors of a d x n matrix via its d x d Gram matrix."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hidden_topics.errors import ConvergenceError

ORTHONORMALITY_TOL = 1e-8
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class TruncatedSVD:
    """Leading left singular vectors (columns) and singular values, descending."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    eigenvalues: np.ndarray  # squared singular values, eigenvalues of W W^T
    requested_k: int

    @property
    def k(self) -> int:
        return self.singular_values.shape[0]

    @property
    def clamped(self) -> bool:
        return self.k < self.requested_k


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive.

    Ties go to the lowest row index (``argmax`` returns the first hit).
    """
    out = np.array(vectors, dtype=np.float64, copy=True)
    if out.size == 0:
        return out
    pivots = np.argmax(np.abs(out), axis=0)
    signs = np.where(out[pivots, np.arange(out.shape[1])] < 0, -1.0, 1.0)
    out *= signs
    return out


def gram(W: np.ndarray) -> np.ndarray:
    G = W @ W.T
    # exact symmetry keeps the tridiagonal reduction independent of BLAS rounding order
    return 0.5 * (G + G.T)


def top_k_svd(
    W: np.ndarray,
    K: int,
    *,
    orthonormality_tol: float = ORTHONORMALITY_TOL,
    residual_tol: float = RESIDUAL_TOL,
    check: bool = True,
) -> TruncatedSVD:
    """Top-K left singular vectors and singular values of ``W``.

    ``K`` is clamped to ``min(d, n)``. With ``check`` on, the result is
    verified against the orthonormality tolerance and the eigen-residual
    ``||W W^T u - s^2 u||`` (relative to the largest eigenvalue) before
    returning; a failed check raises :class:`ConvergenceError`.
    """
    from hidden_topics.linalg import symmetric_eigh

    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {W.shape}")
    if isinstance(K, bool) or int(K) != K or K <= 0:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    if not np.all(np.isfinite(W)):
        raise ValueError("matrix contains non-finite values")
    d, n = W.shape
    if d == 0 or n == 0:
        raise ValueError(f"matrix has an empty dimension: {W.shape}")
    k_eff = min(int(K), d, n)

    G = gram(W)
    evals, evecs = symmetric_eigh(G)
    order = np.argsort(-evals, kind="stable")[:k_eff]
    lam = np.maximum(evals[order], 0.0)
    U = fix_signs(evecs[:, order])

    if check:
        dev = np.abs(U.T @ U - np.eye(k_eff)).max()
        if dev > orthonormality_tol:
            raise ConvergenceError(f"topic vectors not orthonormal (deviation {dev:.3g})")
        scale = max(float(lam[0]) if k_eff else 0.0, 1.0)
        resid = np.abs(G @ U - U * lam).max() / scale
        if resid > residual_tol:
            raise ConvergenceError(f"eigen-residual {resid:.3g} exceeds tolerance")
    return TruncatedSVD(
        left_vectors=U, singular_values=np.sqrt(lam), eigenvalues=lam, requested_k=int(K)
    )
