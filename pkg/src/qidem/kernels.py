"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``QIDEM_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("QIDEM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
multiply = _impl.multiply
convolve = _impl.convolve
cesaro = _impl.cesaro
grouplike_system = _impl.grouplike_system

__all__ = ["BACKEND", "multiply", "convolve", "cesaro", "grouplike_system"]
