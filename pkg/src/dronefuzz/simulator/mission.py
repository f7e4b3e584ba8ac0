"""Mission definitions: the flight plan context a test executes in."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Mission:
    """An autonomous flight plan.

    The vehicle takes off to ``takeoff_altitude``, visits each waypoint in
    order (hovering ``hover_dwell_s`` at each), returns to the launch point,
    and lands. ``rtl_altitude`` is only used when a return-to-launch is
    forced mid-flight (failsafe or manual mode switch), not on the nominal
    return leg.
    """

    name: str
    takeoff_altitude: float
    waypoints: tuple[tuple[float, float, float], ...]
    hover_dwell_s: float = 5.0
    rtl_altitude: float = 30.0

    def __post_init__(self) -> None:
        if self.takeoff_altitude <= 0:
            raise ValueError("takeoff altitude must be positive")
        if not self.waypoints:
            raise ValueError("mission needs at least one waypoint")

    def to_document(self) -> dict:
        return {
            "Takeoff_Altitude": self.takeoff_altitude,
            "Waypoints": [list(wp) for wp in self.waypoints],
            "Hover_Dwell_S": self.hover_dwell_s,
            "RTL_Altitude": self.rtl_altitude,
        }

    @classmethod
    def from_document(cls, name: str, doc: dict) -> "Mission":
        known = {"Takeoff_Altitude", "Waypoints", "Hover_Dwell_S", "RTL_Altitude"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"mission {name}: unknown fields {sorted(unknown)}")
        return cls(
            name=name,
            takeoff_altitude=float(doc["Takeoff_Altitude"]),
            waypoints=tuple(tuple(float(c) for c in wp) for wp in doc["Waypoints"]),
            hover_dwell_s=float(doc.get("Hover_Dwell_S", 5.0)),
            rtl_altitude=float(doc.get("RTL_Altitude", 30.0)),
        )
