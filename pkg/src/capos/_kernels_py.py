"""Pure numpy counting kernels (fallback when the compiled module is absent).

Both kernels return counts in the column order
``(n_present, n_present_pos, n_absent, n_absent_pos)``.
"""

import numpy as np


def cell_counts(incidence, decision, rows, cols):
    """Four-cell contingency counts of each attribute in ``cols`` over ``rows``."""
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    sub = incidence[np.ix_(rows, cols)].astype(np.int64)
    d = decision[rows].astype(np.int64)
    n_present = sub.sum(axis=0)
    n_present_pos = d @ sub
    out = np.empty((cols.shape[0], 4), dtype=np.int64)
    out[:, 0] = n_present
    out[:, 1] = n_present_pos
    out[:, 2] = rows.shape[0] - n_present
    out[:, 3] = int(d.sum()) - n_present_pos
    return out


def threshold_counts(sorted_values, sorted_decision):
    """Midpoint thresholds between consecutive distinct values, with the
    counts of the induced ``value >= threshold`` attribute."""
    v = np.asarray(sorted_values, dtype=np.float64)
    d = np.asarray(sorted_decision, dtype=np.int64)
    n = v.shape[0]
    if n < 2:
        return np.empty(0), np.empty((0, 4), dtype=np.int64)
    idx = np.flatnonzero(v[:-1] != v[1:])
    lo, hi = v[idx], v[idx + 1]
    s = (lo + hi) / 2.0
    # adjacent floats: the midpoint may round down onto ``lo``
    s = np.where(lo < s, s, hi)
    below_pos = np.cumsum(d)[idx]
    total_pos = int(d.sum())
    counts = np.empty((idx.shape[0], 4), dtype=np.int64)
    counts[:, 0] = n - (idx + 1)
    counts[:, 1] = total_pos - below_pos
    counts[:, 2] = idx + 1
    counts[:, 3] = below_pos
    return s, counts
