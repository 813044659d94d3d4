"""Pure-Python/numpy symmetric eigensolver.

Householder reduction to tridiagonal form followed by the implicit QL
algorithm (the EISPACK tred2/tql2 pair). Inner loops over rows and columns
are vectorized with numpy; the outer structure mirrors the compiled kernel
in ``_eigen.pyx`` so both paths share one algorithm.
"""
from __future__ import annotations

import math

import numpy as np

from hidden_topics.errors import ConvergenceError

EPS = 2.0 ** -52


def _tred2(V: np.ndarray, d: np.ndarray, e: np.ndarray) -> None:
    n = V.shape[0]
    d[:] = V[n - 1, :]
    for i in range(n - 1, 0, -1):
        scale = float(np.abs(d[:i]).sum())
        h = 0.0
        if scale == 0.0:
            e[i] = d[i - 1]
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
            V[:i, i] = 0.0
        else:
            d[:i] /= scale
            h = float(d[:i] @ d[:i])
            f = d[i - 1]
            g = math.sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h -= f * g
            d[i - 1] = f - g
            # e <- A d for the leading i x i block; A is held in the lower triangle
            low = np.tril(V[:i, :i])
            V[:i, i] = d[:i]
            e[:i] = low @ d[:i] + low.T @ d[:i] - np.diagonal(low) * d[:i]
            e[:i] /= h
            f = float(e[:i] @ d[:i])
            hh = f / (h + h)
            e[:i] -= hh * d[:i]
            upd = np.outer(e[:i], d[:i]) + np.outer(d[:i], e[:i])
            V[:i, :i] -= np.tril(upd)
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
        d[i] = h

    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            d[: i + 1] = V[: i + 1, i + 1] / h
            g = V[: i + 1, i + 1] @ V[: i + 1, : i + 1]
            V[: i + 1, : i + 1] -= np.outer(d[: i + 1], g)
        V[: i + 1, i + 1] = 0.0
    d[:] = V[n - 1, :]
    V[n - 1, :] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0


def _tql2(V: np.ndarray, d: np.ndarray, e: np.ndarray, max_iter: int) -> None:
    n = V.shape[0]
    e[: n - 1] = e[1:]
    e[n - 1] = 0.0
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1 and abs(e[m]) > EPS * tst1:
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    raise ConvergenceError(f"QL iteration stalled at index {l}")
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2 :] -= h
                f += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    col = V[:, i + 1].copy()
                    V[:, i + 1] = s * V[:, i] + c * col
                    V[:, i] = c * V[:, i] - s * col
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if not abs(e[l]) > EPS * tst1:
                    break
        d[l] += f
        e[l] = 0.0


def symmetric_eigh(A: np.ndarray, max_iter: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and column eigenvectors of a symmetric matrix.

    Only the lower triangle of ``A`` is read.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    V = np.array(A, dtype=np.float64, order="C", copy=True)
    d = np.zeros(n)
    e = np.zeros(n)
    if n == 1:
        return V[0].copy(), np.ones((1, 1))
    _tred2(V, d, e)
    _tql2(V, d, e, max_iter)
    order = np.argsort(d, kind="stable")
    return d[order], V[:, order]
