"""Kernel selection: compiled extension when built, NumPy fallback otherwise.

``IMPL`` names the active lane ("cython" or "numpy").  Both lanes are importable
side by side through :func:`available_impls` so tests and the benchmark can
compare them on identical inputs.
"""

from . import _kernels_py

try:
    from . import _kernels as _ext
except ImportError:
    _ext = None

IMPL = "cython" if _ext is not None else "numpy"
_active = _ext if _ext is not None else _kernels_py


def linking_sum(x1, x2):
    import numpy as np
    return _active.linking_sum(np.ascontiguousarray(x1, dtype=float),
                               np.ascontiguousarray(x2, dtype=float))


def min_pairwise_dist(a, b):
    import numpy as np
    return _active.min_pairwise_dist(np.ascontiguousarray(a, dtype=float),
                                     np.ascontiguousarray(b, dtype=float))


def available_impls() -> dict:
    out = {"numpy": _kernels_py}
    if _ext is not None:
        out["cython"] = _ext
    return out
