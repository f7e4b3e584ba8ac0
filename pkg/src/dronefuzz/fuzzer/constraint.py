"""Scenario constraints: pins and per-dimension subsets over a fuzz space."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from ..errors import ConstraintError, SchemaError
from ..model.types import FuzzSpace

# Dimensions that can be subset. Choice lists always follow the space's
# declaration order so that enumeration order is a pure function of the
# space and the constraint.
DIMENSIONS = (
    "Modes",
    "States",
    "Throttle_Init",
    "Geofence_Stat",
    "Geofence_Pred",
    "Geofence_Act",
    "Wind_Speed",
    "Wind_Direction",
    "Tasks",
)

_PIN_ONLY = ("Mission", "Role", "Drone", "Interaction_Device")
_SCENARIO_KEYS = {"Name", "Pins", "Subsets", "Dedupe_Semantic"}


@dataclass(frozen=True)
class ScenarioConstraint:
    """Fixed-value pins plus per-dimension allowed subsets.

    ``dedupe_semantic`` collapses tests that differ only in an argument their
    task ignores (the argument slot is carried uniformly across task kinds).
    """

    name: str
    pins: Mapping[str, str]
    subsets: Mapping[str, tuple[str, ...]]
    dedupe_semantic: bool = False

    def to_document(self) -> dict:
        return {
            "Name": self.name,
            "Pins": dict(self.pins),
            "Subsets": {k: list(v) for k, v in self.subsets.items()},
            "Dedupe_Semantic": self.dedupe_semantic,
        }


def parse_scenario(document: str | bytes | Mapping) -> ScenarioConstraint:
    if isinstance(document, Mapping):
        doc = dict(document)
    else:
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("scenario root must be an object")
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise SchemaError(f"scenario: unknown fields {sorted(unknown)}")
    pins = doc.get("Pins", {})
    subsets = doc.get("Subsets", {})
    if not isinstance(pins, dict) or not isinstance(subsets, dict):
        raise SchemaError("scenario: Pins and Subsets must be objects")
    for key in pins:
        if key not in _PIN_ONLY and key not in DIMENSIONS:
            raise SchemaError(f"scenario: cannot pin unknown dimension {key!r}")
    for key, values in subsets.items():
        if key not in DIMENSIONS:
            raise SchemaError(f"scenario: cannot subset unknown dimension {key!r}")
        if not isinstance(values, list) or not values:
            raise SchemaError(f"scenario: subset {key} must be a non-empty list")
    return ScenarioConstraint(
        name=str(doc.get("Name", "unnamed")),
        pins={str(k): str(v) for k, v in pins.items()},
        subsets={str(k): tuple(str(v) for v in values) for k, values in subsets.items()},
        dedupe_semantic=bool(doc.get("Dedupe_Semantic", False)),
    )


@dataclass(frozen=True)
class ResolvedScenario:
    """A constraint bound to a space: concrete, ordered choice lists."""

    name: str
    mission: str
    role: str
    drone: str
    device: str
    modes: tuple[str, ...]
    states: tuple[str, ...]
    throttle: tuple[str, ...]
    geofence: tuple[tuple[str, str, str], ...]
    wind: tuple[tuple[str, str], ...]
    tasks: tuple[str, ...]
    arg_slots: int
    dedupe_semantic: bool

    def active_dimensions(self) -> tuple[str, ...]:
        names = []
        for label, values in (
            ("Modes", self.modes),
            ("States", self.states),
            ("Throttle_Init", self.throttle),
            ("Geofence", self.geofence),
            ("Wind", self.wind),
            ("Tasks", self.tasks),
        ):
            if len(values) > 1:
                names.append(label)
        if self.arg_slots > 1:
            names.append("Task_Argument")
        return tuple(names)


def _pick_singleton(
    constraint: ScenarioConstraint, key: str, options: tuple[str, ...]
) -> str:
    pinned = constraint.pins.get(key)
    if pinned is not None:
        if pinned not in options:
            raise ConstraintError(f"{key} pin {pinned!r} not in space")
        return pinned
    if len(options) == 1:
        return options[0]
    raise ConstraintError(f"{key} must be pinned (space offers {len(options)} options)")


def _dim_choices(
    constraint: ScenarioConstraint, key: str, space_values: tuple[str, ...]
) -> tuple[str, ...]:
    pinned = constraint.pins.get(key)
    if pinned is not None:
        if pinned not in space_values:
            raise ConstraintError(f"{key} pin {pinned!r} not in space")
        return (pinned,)
    subset = constraint.subsets.get(key)
    if subset is None:
        return space_values
    missing = [v for v in subset if v not in space_values]
    if missing:
        raise ConstraintError(f"{key} subset values {missing} not in space")
    return tuple(v for v in space_values if v in subset)


def resolve(space: FuzzSpace, constraint: ScenarioConstraint) -> ResolvedScenario:
    """Bind a constraint to a space, checking membership of every value."""
    mission = _pick_singleton(constraint, "Mission", tuple(space.missions))
    role = _pick_singleton(constraint, "Role", space.roles)
    drone = _pick_singleton(constraint, "Drone", tuple(space.drones))
    device = _pick_singleton(constraint, "Interaction_Device", space.interaction_devices)

    modes = _dim_choices(constraint, "Modes", space.modes)
    states = _dim_choices(constraint, "States", space.states)
    throttle = _dim_choices(
        constraint, "Throttle_Init", space.parameters.get("Throttle_Init", ("Neutral",))
    )

    from ..model.types import legal_geofence_combos

    geofence = tuple(
        legal_geofence_combos(
            _dim_choices(constraint, "Geofence_Stat", space.parameters.get("Geofence_Stat", ("Off", "On"))),
            _dim_choices(constraint, "Geofence_Pred", space.parameters.get("Geofence_Pred", ("Off", "On"))),
            _dim_choices(constraint, "Geofence_Act", space.parameters.get("Geofence_Act", ("None",))),
        )
    )
    if not geofence:
        raise ConstraintError("geofence subsets leave no legal combination")

    wind = tuple(
        (s, d)
        for s in _dim_choices(constraint, "Wind_Speed", space.environment.get("Wind_Speed", ("NONE",)))
        for d in _dim_choices(constraint, "Wind_Direction", space.environment.get("Wind_Direction", ("NORTH",)))
    )

    tasks = _dim_choices(constraint, "Tasks", tuple(space.tasks))
    arg_slots = max((len(space.tasks[t].arguments) for t in tasks), default=1) or 1

    if not (modes and states and throttle and wind and tasks):
        raise ConstraintError("a dimension subset is empty")

    return ResolvedScenario(
        name=constraint.name,
        mission=mission,
        role=role,
        drone=drone,
        device=device,
        modes=modes,
        states=states,
        throttle=throttle,
        geofence=geofence,
        wind=wind,
        tasks=tasks,
        arg_slots=arg_slots,
        dedupe_semantic=constraint.dedupe_semantic,
    )
