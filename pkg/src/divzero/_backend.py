"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise,
or when ``DIVZERO_PURE_PYTHON`` is set to a non-empty value, the
pure-Python kernels are used.  Both expose the same functions.
"""

from __future__ import annotations

import os

if os.environ.get("DIVZERO_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND: str = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
