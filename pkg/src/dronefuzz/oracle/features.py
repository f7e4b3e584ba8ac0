"""Per-test feature extraction from a flight log."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import EmptyLog
from ..model.types import TestOutcomeKind
from ..simulator.flightlog import (
    EVENT_FREEFALL,
    EVENT_HARD_LANDING,
    EVENT_MISSION_COMPLETE,
    EVENT_TOUCHDOWN,
    FlightLog,
)
from .deviation import max_deviation

LANDED_EPS = 0.05


@dataclass(frozen=True)
class OutcomeRecord:
    """The feature vector one test contributes to analysis and clustering."""

    test_id: str
    max_deviation: float
    max_altitude: float
    duration: float
    landed: bool
    freefall: bool
    mission_complete: bool
    final_disarm: bool
    hard_landing: bool
    touchdown_speed: float
    hit_never_met: bool = False
    label: TestOutcomeKind | None = None

    def __post_init__(self) -> None:
        if self.max_deviation < 0:
            raise ValueError("max_deviation must be >= 0")
        if self.duration <= 0:
            raise ValueError("duration must be > 0 for an executed test")

    def with_label(self, label: TestOutcomeKind) -> "OutcomeRecord":
        return replace(self, label=label)


def extract_features(
    log: FlightLog,
    blueprint: FlightLog,
    test_id: str = "",
    hit_never_met: bool = False,
) -> OutcomeRecord:
    """Build the outcome record for one executed flight."""
    samples = log.samples
    if not samples:
        raise EmptyLog("cannot extract features from an empty log")
    if not blueprint.samples:
        raise EmptyLog("blueprint log is empty")

    touchdown_speed = 0.0
    for event in log.events_of(EVENT_TOUCHDOWN):
        touchdown_speed = max(touchdown_speed, abs(float(event.detail.get("vz", "0"))))

    final = samples[-1]
    return OutcomeRecord(
        test_id=test_id or str(log.meta.get("test_id", "")),
        max_deviation=max_deviation(blueprint, log),
        max_altitude=max(s.z for s in samples),
        duration=final.time,
        landed=final.z <= LANDED_EPS,
        freefall=log.has_event(EVENT_FREEFALL),
        mission_complete=log.has_event(EVENT_MISSION_COMPLETE),
        final_disarm=(not final.armed) and any(s.armed for s in samples),
        hard_landing=log.has_event(EVENT_HARD_LANDING),
        touchdown_speed=touchdown_speed,
        hit_never_met=hit_never_met,
    )
