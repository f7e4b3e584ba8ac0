"""Kernel selection: compiled extension when available, numpy otherwise.

Set ``DRONEFUZZ_PURE=1`` to force the numpy implementation (used by the
benchmark to compare both paths in one process).
"""

from __future__ import annotations

import os

from . import fallback

if os.environ.get("DRONEFUZZ_PURE") == "1":
    directed_max_min_distance = fallback.directed_max_min_distance
    KERNEL_BACKEND = "numpy"
else:
    try:
        from ._distfield import directed_max_min_distance

        KERNEL_BACKEND = "compiled"
    except ImportError:  # pragma: no cover - build-environment dependent
        directed_max_min_distance = fallback.directed_max_min_distance
        KERNEL_BACKEND = "numpy"

__all__ = ["KERNEL_BACKEND", "directed_max_min_distance", "fallback"]
