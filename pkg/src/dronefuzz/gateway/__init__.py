from .cluster import (
    FEATURE_NAMES,
    SMALL_CORPUS_THRESHOLD,
    ClusterModel,
    Scaling,
    choose_k_elbow,
    feature_matrix,
    grouped_model,
    kmeans,
    standardize,
)
from .ledger import (
    GATE_NOT_READY,
    GATE_READY,
    GateResult,
    LedgerEntry,
    LedgerStore,
    Mitigation,
    RootCause,
    ledger_gate,
    parse_ledger_entry,
    render_report,
)
from .select import SelectionReport, cluster_distances, edge_eligible, zscore_select

__all__ = [
    "FEATURE_NAMES",
    "SMALL_CORPUS_THRESHOLD",
    "ClusterModel",
    "GATE_NOT_READY",
    "GATE_READY",
    "GateResult",
    "LedgerEntry",
    "LedgerStore",
    "Mitigation",
    "RootCause",
    "Scaling",
    "SelectionReport",
    "choose_k_elbow",
    "cluster_distances",
    "edge_eligible",
    "feature_matrix",
    "grouped_model",
    "kmeans",
    "ledger_gate",
    "parse_ledger_entry",
    "render_report",
    "standardize",
    "zscore_select",
]
