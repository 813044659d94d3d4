# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled symmetric eigensolver (Householder tridiagonalization + implicit QL)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()

cdef double EPS = 2.0 ** -52


from hidden_topics.errors import ConvergenceError


cdef void _tred2(double[:, ::1] V, double[::1] d, double[::1] e, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double scale, h, f, g, hh
    for j in range(n):
        d[j] = V[n - 1, j]
    for i in range(n - 1, 0, -1):
        scale = 0.0
        h = 0.0
        for k in range(i):
            scale += fabs(d[k])
        if scale == 0.0:
            e[i] = d[i - 1]
            for j in range(i):
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
                V[j, i] = 0.0
        else:
            for k in range(i):
                d[k] /= scale
                h += d[k] * d[k]
            f = d[i - 1]
            g = sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h = h - f * g
            d[i - 1] = f - g
            for j in range(i):
                e[j] = 0.0
            for j in range(i):
                f = d[j]
                V[j, i] = f
                g = e[j] + V[j, j] * f
                for k in range(j + 1, i):
                    g += V[k, j] * d[k]
                    e[k] += V[k, j] * f
                e[j] = g
            f = 0.0
            for j in range(i):
                e[j] /= h
                f += e[j] * d[j]
            hh = f / (h + h)
            for j in range(i):
                e[j] -= hh * d[j]
            for j in range(i):
                f = d[j]
                g = e[j]
                for k in range(j, i):
                    V[k, j] -= f * e[k] + g * d[k]
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
        d[i] = h

    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            for k in range(i + 1):
                d[k] = V[k, i + 1] / h
            for j in range(i + 1):
                g = 0.0
                for k in range(i + 1):
                    g += V[k, i + 1] * V[k, j]
                for k in range(i + 1):
                    V[k, j] -= g * d[k]
        for k in range(i + 1):
            V[k, i + 1] = 0.0
    for j in range(n):
        d[j] = V[n - 1, j]
        V[n - 1, j] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0


cdef Py_ssize_t _tql2(double[:, ::1] V, double[::1] d, double[::1] e, Py_ssize_t n,
                      int max_iter) noexcept nogil:
    """Returns -1 on success, else the index whose iteration stalled."""
    cdef Py_ssize_t i, k, l, m
    cdef int it
    cdef double f = 0.0, tst1 = 0.0, g, p, r, dl1, h, c, c2, c3, el1, s, s2, a, b
    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0
    for l in range(n):
        tst1 = max(tst1, fabs(d[l]) + fabs(e[l]))
        m = l
        while m < n - 1 and fabs(e[m]) > EPS * tst1:
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h

                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                i = m - 1
                while i >= l:
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    for k in range(n):
                        a = V[k, i]
                        b = V[k, i + 1]
                        V[k, i + 1] = s * a + c * b
                        V[k, i] = c * a - s * b
                    i -= 1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if not fabs(e[l]) > EPS * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return -1


def symmetric_eigh(A, int max_iter=60):
    """Eigenvalues (ascending) and column eigenvectors of a symmetric matrix.

    Only the lower triangle of ``A`` is read.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Vm = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = Vm.shape[0]
    cdef Py_ssize_t stalled
    if n == 1:
        return Vm[0].copy(), np.ones((1, 1))
    d_arr = np.zeros(n)
    e_arr = np.zeros(n)
    cdef double[:, ::1] V = Vm
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    with nogil:
        _tred2(V, d, e, n)
        stalled = _tql2(V, d, e, n, max_iter)
    if stalled >= 0:
        raise ConvergenceError(f"QL iteration stalled at index {stalled}")
    order = np.argsort(d_arr, kind="stable")
    return d_arr[order], Vm[:, order]
