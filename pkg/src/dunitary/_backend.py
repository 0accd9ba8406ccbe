"""Pick the kernel implementation once, at import time.

The compiled extension is used when it was built; setting the environment
variable ``DUNITARY_PURE=1`` forces the pure-Python kernels (handy for
benchmarking and for debugging the fallback path).
"""

from __future__ import annotations

import os

if os.environ.get("DUNITARY_PURE", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

BACKEND: str = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
