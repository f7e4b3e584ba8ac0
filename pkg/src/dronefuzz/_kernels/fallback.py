"""Vectorized numpy fallback for the directed max-min distance kernel.

Processes ``a`` in chunks so the pairwise squared-distance block stays small
enough to be cache- and memory-friendly on long logs.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 256


def directed_max_min_distance(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0 or len(b) == 0:
        raise ValueError("point sets must be non-empty")
    best = 0.0
    for start in range(0, len(a), _CHUNK):
        chunk = a[start : start + _CHUNK]
        diff = chunk[:, None, :] - b[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        row_min = d2.min(axis=1)
        chunk_max = row_min.max()
        if chunk_max > best:
            best = float(chunk_max)
    return float(np.sqrt(best))
