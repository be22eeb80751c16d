"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``POLYCURRENTS_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python twin is used.
"""

import os

from . import _fallback

_force_pure = os.environ.get("POLYCURRENTS_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

frechet = _impl.frechet
dijkstra = _impl.dijkstra

__all__ = ["BACKEND", "frechet", "dijkstra"]
