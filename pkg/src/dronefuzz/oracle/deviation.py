"""Blueprint deviation: directed max-min distance between flight paths.

For every position sample of the blueprint run, find the distance to the
nearest position in the examined log, and report the largest such distance.
The metric is directed (blueprint -> log) on purpose: a flight that hovers
in place forever stays close to some blueprint point and scores low here;
its misbehavior is caught by the duration and mission-completion features
instead.
"""

from __future__ import annotations

import numpy as np

from .._kernels import KERNEL_BACKEND, directed_max_min_distance
from ..errors import EmptyLog
from ..simulator.flightlog import FlightLog

__all__ = ["KERNEL_BACKEND", "max_deviation"]


def _as_points(value) -> np.ndarray:
    if isinstance(value, FlightLog):
        points = value.positions()
    else:
        points = np.asarray(value, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3:
        raise EmptyLog("expected an (n, 3) array of positions")
    if len(points) == 0:
        raise EmptyLog("log has no position samples")
    return np.ascontiguousarray(points)


def max_deviation(blueprint, log) -> float:
    """Largest distance from any blueprint sample to the nearest log sample."""
    return float(directed_max_min_distance(_as_points(blueprint), _as_points(log)))
