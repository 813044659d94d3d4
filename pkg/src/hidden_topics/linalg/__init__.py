"""Dense symmetric eigensolver and truncated SVD of word matrices.

The eigensolver kernel comes in two builds: a compiled Cython extension
(``_eigen``) and a numpy fallback (``_eigen_py``). The compiled kernel is
used when it imports; set ``HIDDEN_TOPICS_PURE_PYTHON=1`` to force the
fallback.
"""
from __future__ import annotations

import os

from hidden_topics.linalg import _eigen_py

if os.environ.get("HIDDEN_TOPICS_PURE_PYTHON", "") not in ("", "0"):
    _kernel = _eigen_py
    BACKEND = "python"
else:
    try:
        from hidden_topics.linalg import _eigen as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _kernel = _eigen_py
        BACKEND = "python"

symmetric_eigh = _kernel.symmetric_eigh

from hidden_topics.linalg.svd import TruncatedSVD, top_k_svd  # noqa: E402

__all__ = ["BACKEND", "TruncatedSVD", "symmetric_eigh", "top_k_svd"]
