"""Kernel selection: compiled extension when available, pure Python otherwise.

Set TTIMATCH_PURE=1 to force the pure-Python implementations (used by the
equivalence tests and the `ttimatch bench` comparison).
"""
from __future__ import annotations

import os

from ._kernels import pure as _pure

_FORCE_PURE = os.environ.get("TTIMATCH_PURE", "") not in ("", "0")

try:  # pragma: no cover - exercised indirectly
    from ._kernels import _core as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

_impl = _pure if (_FORCE_PURE or _compiled is None) else _compiled

BACKEND = "pure" if _impl is _pure else "compiled"

min_weight_perfect_matching = _impl.min_weight_perfect_matching
max_weight_matching_dense = _impl.max_weight_matching_dense
dijkstra_moves = _impl.dijkstra_moves


def dfs_cluster_search_backend():
    """Return the active DFS kernel; signatures differ (sets vs CSR)."""
    return _impl


def backends() -> dict:
    """Both kernel modules, for benchmarking and equivalence tests."""
    out = {"pure": _pure}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
