"""Hot construction kernels with backend selection at import time.

The compiled Cython extension is preferred; the pure numpy twin is used when
the extension is missing or GRAPHFORGE_FORCE_NUMPY is set to a truthy value.
Both expose the same three functions with identical results:

    gabriel_exact_edges(points, closed)        -> (m, 2) int64 edge list
    gabriel_blocked_mask(points, pairs, indptr, candidates, closed) -> bool mask
    snn_cooccurrence_codes(owners, indptr, n)  -> int64 pair codes
"""
from __future__ import annotations

import os

from . import _numpy_impl

_FORCED = os.environ.get("GRAPHFORGE_FORCE_NUMPY", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

if not _FORCED:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _numpy_impl
else:
    _impl = _numpy_impl

gabriel_exact_edges = _impl.gabriel_exact_edges
gabriel_blocked_mask = _impl.gabriel_blocked_mask
snn_cooccurrence_codes = _impl.snn_cooccurrence_codes


def backend_name() -> str:
    """Which kernel implementation is active: "cython" or "numpy"."""
    return _impl.BACKEND_NAME


def numpy_backend():
    """The pure numpy twin, importable regardless of the active backend."""
    return _numpy_impl


def compiled_backend():
    """The compiled twin, or None if the extension is not built."""
    try:
        from . import _fast  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _fast
