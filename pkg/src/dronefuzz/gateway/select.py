"""Downselection: percentile-eligible members, abnormal representatives first.

Within each cluster, members are ranked by distance to their centroid and a
relative z-score is computed. Members strictly above the cluster's 85th
distance percentile or strictly below its 15th are *edge-eligible*.
Selection then proceeds: one abnormal test nearest each centroid, a second
abnormal per cluster while budget remains, then edge-eligible members
round-robin across clusters (far edge first) until the budget ceiling is
reached. Every non-empty cluster contributes at least one test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BudgetInfeasible
from .cluster import ClusterModel

PERCENTILE_LOW = 15.0
PERCENTILE_HIGH = 85.0


@dataclass(frozen=True)
class Selected:
    test_id: str
    cluster: int
    distance: float
    zscore: float
    reason: str


@dataclass(frozen=True)
class SelectionReport:
    selected: tuple[Selected, ...]
    budget: tuple[int, int]
    clusters: int

    def test_ids(self) -> list[str]:
        return [s.test_id for s in self.selected]


def cluster_distances(model: ClusterModel, points: np.ndarray) -> np.ndarray:
    diff = points - model.centroids[model.assignments]
    return np.sqrt((diff * diff).sum(axis=1))


def edge_eligible(distances: np.ndarray) -> np.ndarray:
    """Boolean mask of members outside the [15th, 85th] percentile band."""
    low = np.percentile(distances, PERCENTILE_LOW)
    high = np.percentile(distances, PERCENTILE_HIGH)
    return (distances < low) | (distances > high)


def zscore_select(
    model: ClusterModel,
    points: np.ndarray,
    test_ids: list[str],
    abnormal: list[bool],
    budget: tuple[int, int],
) -> SelectionReport:
    """Pick between ``budget[0]`` and ``budget[1]`` tests across clusters."""
    lo, hi = budget
    if lo < 1 or hi < lo:
        raise BudgetInfeasible(f"budget {budget} is not a valid range")
    clusters = model.nonempty_clusters()
    if hi < len(clusters):
        raise BudgetInfeasible(
            f"budget ceiling {hi} cannot cover {len(clusters)} non-empty clusters"
        )

    distances = cluster_distances(model, points)
    selected: list[Selected] = []
    taken: set[int] = set()

    def order_key(idx: int):
        return (distances[idx], test_ids[idx])

    per_cluster: dict[int, dict] = {}
    for c in clusters:
        members = sorted(model.cluster_members(c).tolist(), key=order_key)
        dists = distances[members]
        mean = float(dists.mean())
        std = float(dists.std()) or 1.0
        mask = edge_eligible(dists) if len(members) > 1 else np.zeros(len(members), dtype=bool)
        eligible = [m for m, flag in zip(members, mask) if flag]
        # Far edge first, then near edge; ties broken by test id.
        eligible.sort(key=lambda m: (-distances[m], test_ids[m]))
        per_cluster[c] = {
            "members": members,
            "abnormal": [m for m in members if abnormal[m]],
            "eligible": eligible,
            "mean": mean,
            "std": std,
        }

    def pick(idx: int, cluster: int, reason: str) -> None:
        info = per_cluster[cluster]
        taken.add(idx)
        selected.append(
            Selected(
                test_id=test_ids[idx],
                cluster=cluster,
                distance=float(distances[idx]),
                zscore=(float(distances[idx]) - info["mean"]) / info["std"],
                reason=reason,
            )
        )

    # Round one: an abnormal test nearest each centroid, falling back to the
    # nearest member so every cluster is represented.
    for c in clusters:
        info = per_cluster[c]
        if info["abnormal"]:
            pick(info["abnormal"][0], c, "abnormal-representative")
        else:
            pick(info["members"][0], c, "representative")

    # Round two: a second near-centroid abnormal per cluster while room lasts.
    for c in clusters:
        if len(selected) >= hi:
            break
        info = per_cluster[c]
        for idx in info["abnormal"][1:2]:
            if idx not in taken and len(selected) < hi:
                pick(idx, c, "abnormal-representative")

    # Fill: edge-eligible members, round-robin across clusters.
    progressed = True
    while len(selected) < hi and progressed:
        progressed = False
        for c in clusters:
            if len(selected) >= hi:
                break
            info = per_cluster[c]
            while info["eligible"] and info["eligible"][0] in taken:
                info["eligible"].pop(0)
            if info["eligible"]:
                pick(info["eligible"].pop(0), c, "edge")
                progressed = True

    # Last resort when edges run dry before the floor: any unclaimed member,
    # nearest-centroid first, so small corpora can still fill a budget.
    if len(selected) < lo:
        rest = sorted(
            (i for c in clusters for i in per_cluster[c]["members"] if i not in taken),
            key=order_key,
        )
        for idx in rest:
            if len(selected) >= lo:
                break
            pick(idx, int(model.assignments[idx]), "fill")

    return SelectionReport(selected=tuple(selected), budget=(lo, hi), clusters=len(clusters))
