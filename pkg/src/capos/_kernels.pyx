# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels. Same contracts as ``_kernels_py``."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def cell_counts(const unsigned char[:, ::1] incidence,
                const unsigned char[::1] decision,
                const Py_ssize_t[::1] rows,
                const Py_ssize_t[::1] cols):
    cdef Py_ssize_t n_rows = rows.shape[0]
    cdef Py_ssize_t n_cols = cols.shape[0]
    cdef Py_ssize_t i, j, r, first = 0
    cdef long long total_pos = 0
    cdef unsigned char d, v
    cdef bint contiguous = n_cols > 0
    present_buf = np.zeros(n_cols, dtype=np.int64)
    pos_buf = np.zeros(n_cols, dtype=np.int64)
    cdef long long[::1] present = present_buf
    cdef long long[::1] pos = pos_buf
    cdef const unsigned char* row
    if n_cols:
        first = cols[0]
    for j in range(n_cols):
        if cols[j] != first + j:
            contiguous = False
            break
    for i in range(n_rows):
        r = rows[i]
        d = decision[r]
        total_pos += d
        row = &incidence[r, 0]
        if contiguous:
            row += first
            for j in range(n_cols):
                v = row[j]
                present[j] += v
                pos[j] += v & d
        else:
            for j in range(n_cols):
                v = row[cols[j]]
                present[j] += v
                pos[j] += v & d
    out = np.empty((n_cols, 4), dtype=np.int64)
    cdef long long[:, ::1] res = out
    for j in range(n_cols):
        res[j, 0] = present[j]
        res[j, 1] = pos[j]
        res[j, 2] = n_rows - present[j]
        res[j, 3] = total_pos - pos[j]
    return out


def threshold_counts(const double[::1] sorted_values,
                     const unsigned char[::1] sorted_decision):
    cdef Py_ssize_t n = sorted_values.shape[0]
    cdef Py_ssize_t i, k = 0
    cdef long long below_pos = 0, total_pos = 0
    cdef double lo, hi, s
    for i in range(n):
        total_pos += sorted_decision[i]
    thresholds = np.empty(max(n - 1, 0), dtype=np.float64)
    counts = np.empty((max(n - 1, 0), 4), dtype=np.int64)
    cdef double[::1] th = thresholds
    cdef long long[:, ::1] res = counts
    for i in range(n - 1):
        below_pos += sorted_decision[i]
        lo = sorted_values[i]
        hi = sorted_values[i + 1]
        if lo == hi:
            continue
        s = (lo + hi) / 2.0
        if not (lo < s):
            s = hi
        th[k] = s
        res[k, 0] = n - (i + 1)
        res[k, 1] = total_pos - below_pos
        res[k, 2] = i + 1
        res[k, 3] = below_pos
        k += 1
    return thresholds[:k].copy(), counts[:k].copy()
