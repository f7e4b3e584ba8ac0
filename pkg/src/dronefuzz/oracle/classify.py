"""Outcome labeling: Valid-Nominal / Valid-Abnormal / Invalid-Untested.

A test whose precondition never held is Invalid-Untested regardless of its
features. A valid test is Abnormal when any single criterion trips:
incomplete mission, missing final disarm, excessive altitude, excessive
duration relative to the blueprint, a freefall, a hard landing, or excessive
deviation from the blueprint path. The rule is a pure disjunction of
monotone predicates, so worsening any one feature can never turn an
Abnormal test Nominal.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model.types import TestOutcomeKind
from .features import OutcomeRecord


@dataclass(frozen=True)
class Thresholds:
    deviation_limit_m: float = 5.0
    altitude_limit_m: float = 20.0
    duration_factor: float = 2.0
    hard_landing_vz: float = 2.0

    def __post_init__(self) -> None:
        for name in ("deviation_limit_m", "altitude_limit_m", "duration_factor", "hard_landing_vz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"threshold {name} must be strictly positive")

    def to_document(self) -> dict:
        return {
            "Deviation_Limit_M": self.deviation_limit_m,
            "Altitude_Limit_M": self.altitude_limit_m,
            "Duration_Factor": self.duration_factor,
            "Hard_Landing_VZ": self.hard_landing_vz,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Thresholds":
        return cls(
            deviation_limit_m=float(doc.get("Deviation_Limit_M", 5.0)),
            altitude_limit_m=float(doc.get("Altitude_Limit_M", 20.0)),
            duration_factor=float(doc.get("Duration_Factor", 2.0)),
            hard_landing_vz=float(doc.get("Hard_Landing_VZ", 2.0)),
        )


def classify(
    record: OutcomeRecord,
    thresholds: Thresholds,
    blueprint_duration: float,
) -> TestOutcomeKind:
    if record.hit_never_met:
        return TestOutcomeKind.INVALID_UNTESTED
    abnormal = (
        not record.mission_complete
        or not record.final_disarm
        or record.max_altitude > thresholds.altitude_limit_m
        or record.duration > thresholds.duration_factor * blueprint_duration
        or record.freefall
        or record.touchdown_speed > thresholds.hard_landing_vz
        or record.max_deviation > thresholds.deviation_limit_m
    )
    return TestOutcomeKind.VALID_ABNORMAL if abnormal else TestOutcomeKind.VALID_NOMINAL
