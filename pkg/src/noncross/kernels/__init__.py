"""Kernel dispatch: the compiled extension when available, else pure Python.

Set ``NONCROSS_PURE_PYTHON=1`` to force the fallback.  Both backends take a
square matrix of non-negative integer weights (lists of Python ints) and
return identical results.
"""

from __future__ import annotations

import importlib
import os

from . import _pure


def _load_core():
    if os.environ.get("NONCROSS_PURE_PYTHON", "") in ("1", "true", "yes"):
        return None
    try:
        return importlib.import_module(__name__ + "._core")
    except ImportError:  # pragma: no cover - depends on the build
        return None


_core = _load_core()

BACKEND = "compiled" if _core is not None else "python"


def to_limbs(W):
    """Pack an integer matrix into a (n, n, L) uint64 little-endian limb array."""
    import numpy as np

    n = len(W)
    top = max((w for row in W for w in row), default=0)
    # room for sums of up to n edges
    L = max(1, (top.bit_length() + n.bit_length() + 64) // 64)
    arr = np.zeros((n, n, L), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i in range(n):
        for j in range(n):
            w = W[i][j]
            if w < 0:
                raise ValueError("negative weight")
            for k in range(L):
                arr[i, j, k] = w & mask
                w >>= 64
    return arr


def brute_max(W, kind, backend=None):
    if _use_core(backend) and len(W) > 2:
        return _core.brute_max(to_limbs(W), kind)
    return _pure.brute_max(W, len(W), kind)


def brute_window(W, kind, thresh, backend=None):
    if _use_core(backend) and len(W) > 2:
        return _core.brute_window(to_limbs(W), kind, thresh)
    return _pure.brute_window(W, len(W), kind, thresh)


def dp_topk(W, kind, K, backend=None):
    # tiny inputs are not worth packing, and the compiled tour DP needs n >= 3
    if _use_core(backend) and len(W) > 2:
        A = to_limbs(W)
        if kind == "matching":
            return _core.dp_topk_matching(A, K)
        return _core.dp_topk_tour(A, kind, K)
    return _pure.dp_topk(W, len(W), kind, K)


def _use_core(backend):
    if backend == "python":
        return False
    if backend == "compiled" and _core is None:
        raise RuntimeError("compiled kernels are not built")
    return _core is not None


enumerate_structures = _pure.enumerate_structures
