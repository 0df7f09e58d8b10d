# cython: language_level=3
"""Compiled inner loops.

Each function here has a drop-in twin in ``_fallback.py``; the two must
agree to rounding.
"""
import numpy as np

from libc.math cimport fabs
from libc.stdlib cimport malloc, free


def project_rows_capped_simplex(double[:, ::1] V):
    """Project row ``i`` of a square matrix onto {s >= 0, sum(s) = 1, s_i = 0}.

    Uses the sort-free active-set scheme: recompute the shift from the
    surviving entries and drop those at or below it until nothing changes.
    """
    cdef Py_ssize_t n = V.shape[0]
    if V.shape[1] != n:
        raise ValueError("expected a square matrix")
    if n < 2:
        raise ValueError("need at least two columns")
    out_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double* buf = <double*>malloc((n - 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, k, m, kept
    cdef double total, theta, t
    try:
        with nogil:
            for i in range(n):
                m = 0
                total = 0.0
                for j in range(n):
                    if j != i:
                        buf[m] = V[i, j]
                        total = total + buf[m]
                        m += 1
                theta = (total - 1.0) / m
                while True:
                    kept = 0
                    total = 0.0
                    for k in range(m):
                        if buf[k] > theta:
                            buf[kept] = buf[k]
                            total = total + buf[k]
                            kept += 1
                    if kept == m:
                        break
                    m = kept
                    theta = (total - 1.0) / m
                for j in range(n):
                    if j != i:
                        t = V[i, j] - theta
                        out[i, j] = t if t > 0.0 else 0.0
    finally:
        free(buf)
    return out_arr


def firm_threshold_array(double[::1] x, double lam, double a):
    """Elementwise firm threshold of a flat array."""
    cdef Py_ssize_t n = x.shape[0], i
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double ax, scale
    cdef bint hard = a <= lam
    scale = 0.0 if hard else a / (a - lam)
    with nogil:
        for i in range(n):
            ax = fabs(x[i])
            if ax <= lam:
                out[i] = 0.0
            elif hard or ax > a:
                out[i] = x[i]
            elif x[i] > 0:
                out[i] = scale * (ax - lam)
            else:
                out[i] = -scale * (ax - lam)
    return out_arr


def pairwise_sq_dists(double[:, ::1] P):
    """Squared Euclidean distances between the rows of ``P``."""
    cdef Py_ssize_t n = P.shape[0], d = P.shape[1], i, j, k
    out_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double acc, diff
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    diff = P[i, k] - P[j, k]
                    acc = acc + diff * diff
                out[i, j] = acc
                out[j, i] = acc
    return out_arr
