"""Kernel backend selection.

The compiled Cython core is used when it was built; otherwise the numpy
fallback. Set ``QSPECTRAL_PURE=1`` to force the fallback at import time.
``get_backend(name)`` returns a specific backend for comparisons and benchmarks.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _fallback

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _fallback}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if os.environ.get("QSPECTRAL_PURE") or _ckernels is None:
    backend = _fallback
    BACKEND_NAME = "python"
else:
    backend = _ckernels
    BACKEND_NAME = "cython"


def get_backend(name: str) -> ModuleType:
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
