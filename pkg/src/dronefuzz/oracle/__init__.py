from .classify import Thresholds, classify
from .deviation import KERNEL_BACKEND, max_deviation
from .features import OutcomeRecord, extract_features

__all__ = [
    "KERNEL_BACKEND",
    "OutcomeRecord",
    "Thresholds",
    "classify",
    "extract_features",
    "max_deviation",
]
