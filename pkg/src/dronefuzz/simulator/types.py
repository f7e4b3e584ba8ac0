"""Simulator value types: vehicle state, geofence, and manual control inputs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import RejectedInput
from ..model import vocab

CONTROL_SET_MODE = "SET_MODE"
CONTROL_SET_THROTTLE = "SET_THROTTLE"
CONTROL_SET_STICK = "SET_STICK"
CONTROL_KILL_MOTORS = "KILL_MOTORS"

CONTROL_KINDS = (
    CONTROL_SET_MODE,
    CONTROL_SET_THROTTLE,
    CONTROL_SET_STICK,
    CONTROL_KILL_MOTORS,
)

# Wind class -> speed in m/s. A "Northerly" wind blows from the north, so the
# induced drift vector points south.
WIND_CLASS_SPEEDS = {"NONE": 0.0, "MEDIUM": 5.0, "HIGH": 10.0}
WIND_DRIFT_VECTORS = {
    "NORTH": (0.0, -1.0),
    "SOUTH": (0.0, 1.0),
    "EAST": (-1.0, 0.0),
    "WEST": (1.0, 0.0),
}


def wind_vector(speed_class: str, direction: str) -> tuple[float, float]:
    speed = WIND_CLASS_SPEEDS.get(speed_class, 0.0)
    dx, dy = WIND_DRIFT_VECTORS.get(direction, (0.0, -1.0))
    return (speed * dx, speed * dy)


@dataclass
class VehicleState:
    """Mutable per-tick vehicle state (one vehicle per world)."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    mode: str = "OFFBOARD"
    lifecycle: str = "Pre-arm"
    armed: bool = False
    motors_on: bool = False
    throttle: float = 0.0
    stick_pitch: float = 0.0
    stick_roll: float = 0.0
    time: float = 0.0

    def horizontal_distance_from_home(self) -> float:
        return (self.x * self.x + self.y * self.y) ** 0.5


@dataclass(frozen=True)
class GeofenceConfig:
    """A convex horizontal boundary plus a ceiling, and the breach response."""

    status: str = "Off"
    prediction: str = "Off"
    action: str = "None"
    boundary: tuple[tuple[float, float], ...] = ()
    max_altitude: float = 50.0

    @classmethod
    def square(
        cls,
        status: str,
        prediction: str,
        action: str,
        half_width: float = 40.0,
        max_altitude: float = 50.0,
    ) -> "GeofenceConfig":
        w = half_width
        return cls(
            status=status,
            prediction=prediction,
            action=action,
            boundary=((-w, -w), (w, -w), (w, w), (-w, w)),
            max_altitude=max_altitude,
        )

    def contains(self, x: float, y: float, z: float) -> bool:
        if z > self.max_altitude:
            return False
        return self.contains_xy(x, y)

    def contains_xy(self, x: float, y: float) -> bool:
        # Convex polygon in counter-clockwise order: inside iff the point is
        # on the left of (or on) every edge.
        pts = self.boundary
        n = len(pts)
        for i in range(n):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % n]
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < 0:
                return False
        return True


@dataclass(frozen=True)
class FenceCheck:
    """Outcome of a geofence evaluation at one instant."""

    breached: bool
    predicted: bool
    action: str


@dataclass(frozen=True)
class ControlInput:
    """One manual control action, as a radio/GUI input would deliver it.

    ``issue_time`` is when the input was commanded; the world applies inputs
    only at tick boundaries.
    """

    kind: str
    mode: str | None = None
    throttle_position: str | None = None
    stick: tuple[float, float] | None = None
    issue_time: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in CONTROL_KINDS:
            raise RejectedInput(f"unknown control kind {self.kind!r}")
        if self.kind == CONTROL_SET_MODE and not self.mode:
            raise RejectedInput("SET_MODE requires a mode")
        if self.kind == CONTROL_SET_THROTTLE:
            if self.throttle_position not in vocab.THROTTLE_LEVELS:
                raise RejectedInput(f"unknown throttle position {self.throttle_position!r}")
        if self.kind == CONTROL_SET_STICK and self.stick is None:
            raise RejectedInput("SET_STICK requires a (pitch, roll) pair")

    def to_document(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.mode is not None:
            doc["mode"] = self.mode
        if self.throttle_position is not None:
            doc["throttle_position"] = self.throttle_position
        if self.stick is not None:
            doc["stick"] = [self.stick[0], self.stick[1]]
        return doc

    @classmethod
    def from_document(cls, doc: dict, issue_time: float = 0.0) -> "ControlInput":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise RejectedInput("control document must carry a kind")
        stick = doc.get("stick")
        return cls(
            kind=str(doc["kind"]),
            mode=doc.get("mode"),
            throttle_position=doc.get("throttle_position"),
            stick=(float(stick[0]), float(stick[1])) if stick is not None else None,
            issue_time=issue_time,
        )


@dataclass(frozen=True)
class DroneSetup:
    """Static per-test vehicle configuration derived from the test document."""

    geofence: GeofenceConfig = field(default_factory=GeofenceConfig)
    throttle_init: str = "Neutral"
    arm_neutral_throttle: bool = False
    kill_grace_s: float = 0.0
