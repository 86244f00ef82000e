"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback in ``_kernels_py``. Set ``INTERP_QSP_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and not os.environ.get("INTERP_QSP_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

clenshaw = _impl.clenshaw
laurent_horner = _impl.laurent_horner
max_lagged_difference = _impl.max_lagged_difference

__all__ = [
    "BACKEND",
    "BACKENDS",
    "clenshaw",
    "laurent_horner",
    "max_lagged_difference",
]
