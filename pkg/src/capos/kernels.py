"""Backend selection for the counting kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementation in ``_kernels_py`` is used. Setting ``CAPOS_PURE_PYTHON=1``
forces the fallback. Both backends return identical results.
"""

import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("CAPOS_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def cell_counts(incidence, decision, rows, cols, backend=None):
    """Return an int64 array of shape ``(len(cols), 4)``.

    Columns are ``n_present, n_present_pos, n_absent, n_absent_pos`` for each
    attribute in ``cols``, counted over the object indices in ``rows``.
    """
    impl = _pick(backend)
    return impl.cell_counts(
        np.ascontiguousarray(incidence, dtype=np.uint8),
        np.ascontiguousarray(decision, dtype=np.uint8),
        np.ascontiguousarray(rows, dtype=np.intp),
        np.ascontiguousarray(cols, dtype=np.intp),
    )


def threshold_counts(values, decision, backend=None):
    """Candidate cuts of a continuous column and their four-cell counts.

    ``values`` need not be sorted. Returns ``(thresholds, counts)`` where
    ``thresholds`` is increasing and ``counts`` describes the attribute
    ``value >= threshold`` in the same column order as :func:`cell_counts`.
    """
    impl = _pick(backend)
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    return impl.threshold_counts(
        np.ascontiguousarray(values[order]),
        np.ascontiguousarray(np.asarray(decision, dtype=np.uint8)[order]),
    )


def _pick(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
