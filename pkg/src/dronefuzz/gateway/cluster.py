"""K-means over outcome features, elbow heuristic, and feature scaling.

The clustering objective is the within-cluster sum of squares: for clusters
C_1..C_k with centroids mu_i, WCSS = sum over i of sum over x in C_i of
||x - mu_i||^2. Features are standardized per column before fitting so the
objective is invariant to positive rescaling of any raw feature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInput, RangeError
from ..oracle.features import OutcomeRecord

MAX_ITERATIONS = 300

# Outcome features used as clustering dimensions; booleans become 0/1.
FEATURE_NAMES = (
    "max_deviation",
    "max_altitude",
    "duration",
    "landed",
    "freefall",
    "mission_complete",
    "final_disarm",
)


def feature_matrix(records: list[OutcomeRecord]) -> np.ndarray:
    rows = [
        (
            r.max_deviation,
            r.max_altitude,
            r.duration,
            float(r.landed),
            float(r.freefall),
            float(r.mission_complete),
            float(r.final_disarm),
        )
        for r in records
    ]
    return np.array(rows, dtype=np.float64)


@dataclass(frozen=True)
class Scaling:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, features: np.ndarray) -> np.ndarray:
        return (features - self.mean) / self.std


def standardize(features: np.ndarray) -> tuple[np.ndarray, Scaling]:
    """Per-column zero-mean unit-variance scaling; constant columns pass through."""
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    scaling = Scaling(mean=mean, std=std)
    return scaling.apply(features), scaling


@dataclass(frozen=True)
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    wcss: float
    scaling: Scaling
    seed: int
    degenerate: bool = False

    def cluster_members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == cluster)

    def nonempty_clusters(self) -> list[int]:
        return [c for c in range(self.k) if len(self.cluster_members(c)) > 0]


def _farthest_point_init(points: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Seeded farthest-point seeding: random first centroid, then repeatedly
    the point farthest from its nearest chosen centroid (ties to the lowest
    index)."""
    rng = np.random.default_rng(seed)
    n = len(points)
    chosen = [int(rng.integers(n))]
    min_d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        nxt = int(np.argmax(min_d2))
        chosen.append(nxt)
        d2 = ((points - points[nxt]) ** 2).sum(axis=1)
        min_d2 = np.minimum(min_d2, d2)
    return points[chosen].copy()


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _wcss(points: np.ndarray, centroids: np.ndarray, assignments: np.ndarray) -> float:
    diff = points - centroids[assignments]
    return float((diff * diff).sum())


def kmeans(points: np.ndarray, k: int, seed: int = 0, scaling: Scaling | None = None) -> ClusterModel:
    """Lloyd iteration from seeded farthest-point initialization.

    ``points`` must already be standardized (use :func:`standardize`); pass
    the scaling along so the model records how raw features map in.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    if k < 1 or k > n:
        raise DegenerateInput(f"k={k} out of range for {n} records")
    degenerate = bool(n > 1 and k > 1 and np.allclose(points, points[0]))

    centroids = _farthest_point_init(points, k, seed)
    assignments = _assign(points, centroids)
    for _ in range(MAX_ITERATIONS):
        new_centroids = centroids.copy()
        for c in range(k):
            members = points[assignments == c]
            if len(members):
                new_centroids[c] = members.mean(axis=0)
        new_assignments = _assign(points, new_centroids)
        centroids = new_centroids
        if np.array_equal(new_assignments, assignments):
            assignments = new_assignments
            break
        assignments = new_assignments

    return ClusterModel(
        k=k,
        centroids=centroids,
        assignments=assignments,
        wcss=_wcss(points, centroids, assignments),
        scaling=scaling if scaling is not None else Scaling(np.zeros(points.shape[1]), np.ones(points.shape[1])),
        seed=seed,
        degenerate=degenerate,
    )


SMALL_CORPUS_THRESHOLD = 40


def grouped_model(
    points: np.ndarray, group_keys: list, scaling: Scaling | None = None
) -> ClusterModel:
    """Clustering by predeclared test type instead of k-means.

    Small corpora don't carry enough structure for a meaningful k-means fit;
    below :data:`SMALL_CORPUS_THRESHOLD` records, callers group tests by
    their kind (task kind x geofence status) and this builds the equivalent
    model: one cluster per distinct key, centroid at the group mean.
    """
    points = np.asarray(points, dtype=np.float64)
    if len(points) != len(group_keys):
        raise DegenerateInput("one group key per record required")
    distinct = sorted(set(group_keys), key=str)
    index = {key: i for i, key in enumerate(distinct)}
    assignments = np.array([index[key] for key in group_keys], dtype=int)
    centroids = np.zeros((len(distinct), points.shape[1]))
    for i in range(len(distinct)):
        centroids[i] = points[assignments == i].mean(axis=0)
    return ClusterModel(
        k=len(distinct),
        centroids=centroids,
        assignments=assignments,
        wcss=_wcss(points, centroids, assignments),
        scaling=scaling
        if scaling is not None
        else Scaling(np.zeros(points.shape[1]), np.ones(points.shape[1])),
        seed=0,
    )


def choose_k_elbow(points: np.ndarray, k_range: tuple[int, int], seed: int = 0) -> int:
    """Knee-of-curve cluster count: sweep WCSS(k) and return the k with the
    largest second difference WCSS(k-1) - 2*WCSS(k) + WCSS(k+1).

    Ties go to the smallest k; data with no knee at all (flat WCSS, e.g. all
    records identical) also returns the smallest k in the range.
    """
    lo, hi = k_range
    n = len(points)
    if lo < 1 or hi > n or lo > hi:
        raise RangeError(f"k range {k_range} out of bounds for {n} records")
    ks = list(range(lo, hi + 1))
    wcss = [kmeans(points, k, seed=seed).wcss for k in ks]
    if len(ks) < 3 or all(abs(w - wcss[0]) < 1e-12 for w in wcss):
        return lo
    best_k = None
    best_curve = -np.inf
    for i in range(1, len(ks) - 1):
        curve = wcss[i - 1] - 2.0 * wcss[i] + wcss[i + 1]
        if curve > best_curve + 1e-12:
            best_curve = curve
            best_k = ks[i]
    return best_k if best_k is not None else lo
