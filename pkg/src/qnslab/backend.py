"""Select the membership kernel at import time.

The compiled Cython kernel is preferred; the numpy fallback is used when the
extension was not built or when ``QNSLAB_FORCE_PYTHON`` is set.  Both produce
bit-identical masks, so the choice never changes numerical results.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("QNSLAB_FORCE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

PRIM_BALL = _kernels_py.PRIM_BALL
PRIM_RECT = _kernels_py.PRIM_RECT
PRIM_POLYGON = _kernels_py.PRIM_POLYGON

contains_many = _impl.contains_many


def backend_name() -> str:
    """Name of the active membership kernel: "compiled" or "python"."""
    return BACKEND
