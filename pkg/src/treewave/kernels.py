"""Kernel backend selection: compiled Cython core when available, numpy
fallback otherwise. Set TREEWAVE_PURE=1 to force the fallback."""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("TREEWAVE_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

run_leapfrog = _impl.run_leapfrog
volterra_march = _impl.volterra_march


def backend_name() -> str:
    return _impl.BACKEND
