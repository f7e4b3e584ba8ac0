"""Flight log: one sample per tick plus interleaved event records.

Serialized form, line-delimited and byte-stable:

    #%dronefuzz-flightlog v1 {"mission": ..., "wind": ..., "dt": 0.1}
    S <t> <x> <y> <z> <vx> <vy> <vz> <mode> <lifecycle> <armed> <motors>
    E <t> <KIND> key=value ...

Floats are fixed at six decimals; booleans are 0/1; event details are sorted
by key. Identical runs therefore produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from ..errors import SchemaError

EVENT_MANUAL_CONTROL = "ManualControl"
EVENT_BREACH = "Breach"
EVENT_FAILSAFE = "FailsafeAction"
EVENT_FREEFALL = "Freefall"
EVENT_HARD_LANDING = "HardLanding"
EVENT_EARLY_LANDING = "EarlyLanding"
EVENT_TOUCHDOWN = "Touchdown"
EVENT_MISSION_COMPLETE = "MissionComplete"
EVENT_TIMEOUT = "Timeout"
EVENT_ARM = "Arm"
EVENT_DISARM = "Disarm"


class Sample(NamedTuple):
    time: float
    x: float
    y: float
    z: float
    vx: float
    vy: float
    vz: float
    mode: str
    lifecycle: str
    armed: bool
    motors_on: bool


@dataclass(frozen=True)
class LogEvent:
    time: float
    kind: str
    detail: dict = field(default_factory=dict)


def _f(value: float) -> str:
    return format(value, ".6f")


class FlightLog:
    """Append-only record stream for one simulated flight."""

    def __init__(self, meta: dict | None = None):
        self.meta = dict(meta or {})
        self.records: list[Sample | LogEvent] = []

    # -- building ---------------------------------------------------------

    def add_sample(self, sample: Sample) -> None:
        self.records.append(sample)

    def add_event(self, event: LogEvent) -> None:
        self.records.append(event)

    # -- views ------------------------------------------------------------

    @property
    def samples(self) -> list[Sample]:
        return [r for r in self.records if isinstance(r, Sample)]

    @property
    def events(self) -> list[LogEvent]:
        return [r for r in self.records if isinstance(r, LogEvent)]

    def events_of(self, kind: str) -> list[LogEvent]:
        return [e for e in self.events if e.kind == kind]

    def has_event(self, kind: str) -> bool:
        return any(e.kind == kind for e in self.events)

    def positions(self) -> np.ndarray:
        """(n, 3) array of sampled positions."""
        return np.array([(s.x, s.y, s.z) for s in self.samples], dtype=np.float64)

    def duration(self) -> float:
        samples = self.samples
        return samples[-1].time if samples else 0.0

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = ["#%dronefuzz-flightlog v1 " + json.dumps(self.meta, sort_keys=True)]
        for record in self.records:
            if isinstance(record, Sample):
                lines.append(
                    "S "
                    + " ".join(
                        (
                            _f(record.time),
                            _f(record.x),
                            _f(record.y),
                            _f(record.z),
                            _f(record.vx),
                            _f(record.vy),
                            _f(record.vz),
                            record.mode,
                            record.lifecycle,
                            "1" if record.armed else "0",
                            "1" if record.motors_on else "0",
                        )
                    )
                )
            else:
                parts = ["E", _f(record.time), record.kind]
                for key in sorted(record.detail):
                    parts.append(f"{key}={record.detail[key]}")
                lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FlightLog":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#%dronefuzz-flightlog"):
            raise SchemaError("not a flight log (missing header)")
        meta_json = lines[0].split(" ", 2)[2] if lines[0].count(" ") >= 2 else "{}"
        log = cls(meta=json.loads(meta_json))
        for line in lines[1:]:
            if not line.strip():
                continue
            fields = line.split(" ")
            if fields[0] == "S":
                if len(fields) != 12:
                    raise SchemaError(f"bad sample line: {line!r}")
                log.add_sample(
                    Sample(
                        time=float(fields[1]),
                        x=float(fields[2]),
                        y=float(fields[3]),
                        z=float(fields[4]),
                        vx=float(fields[5]),
                        vy=float(fields[6]),
                        vz=float(fields[7]),
                        mode=fields[8],
                        lifecycle=fields[9],
                        armed=fields[10] == "1",
                        motors_on=fields[11] == "1",
                    )
                )
            elif fields[0] == "E":
                detail = {}
                for part in fields[3:]:
                    key, _, value = part.partition("=")
                    detail[key] = value
                log.add_event(LogEvent(time=float(fields[1]), kind=fields[2], detail=detail))
            else:
                raise SchemaError(f"unknown record type in log: {line[:20]!r}")
        return log


def positions_of(samples: Iterable[Sample]) -> np.ndarray:
    return np.array([(s.x, s.y, s.z) for s in samples], dtype=np.float64)
