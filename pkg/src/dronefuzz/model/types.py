"""Core value types: the fuzz space, interaction tasks, and executable tests.

Everything here is immutable and safe to share across worker processes; the
generators and the runner treat these as plain values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from ..errors import ConsistencyError, ConstraintError
from ..simulator.mission import Mission
from . import vocab

PARAM_GEOFENCE_STAT = "Geofence_Stat"
PARAM_GEOFENCE_PRED = "Geofence_Pred"
PARAM_GEOFENCE_ACT = "Geofence_Act"
PARAM_THROTTLE_INIT = "Throttle_Init"


class TestOutcomeKind(enum.Enum):
    """Final label of one executed test."""

    VALID_NOMINAL = "Valid-Nominal"
    VALID_ABNORMAL = "Valid-Abnormal"
    INVALID_UNTESTED = "Invalid-Untested"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Task:
    """One human action: a kind plus its argument, if the kind takes one."""

    kind: str
    argument: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in vocab.TASK_KINDS:
            raise ConstraintError(f"unknown task kind {self.kind!r}")
        takes_argument = self.kind in vocab.ARGUMENT_TASKS
        if takes_argument and not self.argument:
            raise ConstraintError(f"task {self.kind} requires an argument")
        if not takes_argument and self.argument is not None:
            raise ConstraintError(f"task {self.kind} takes no argument")

    def phrase(self) -> str:
        """Human/document form, e.g. ``SET MODE TO STABILIZED``."""
        if self.kind == vocab.TASK_CHANGE_MODE:
            return f"SET MODE TO {self.argument}"
        if self.kind == vocab.TASK_MOVE_THROTTLE:
            return f"MOVE THROTTLE TO {self.argument}"
        if self.kind == vocab.TASK_KILL_MOTORS:
            return "PRESS KILL SWITCH"
        if self.kind == vocab.TASK_PRESS_RTL:
            return "PRESS RTL BUTTON"
        return "PRESS LAND BUTTON"


@dataclass(frozen=True)
class HIT:
    """A human interaction task plus the mode/state precondition gating it.

    ``delay_s`` is the timing-fuzz slot: seconds to wait after the
    precondition is first satisfied before the task is dispatched.
    """

    hit_id: str
    drones: tuple[str, ...]
    task: Task
    precondition_mode: str
    precondition_state: str
    precondition_params: Mapping[str, str] = field(default_factory=dict)
    delay_s: float = 0.0

    def __post_init__(self) -> None:
        if not self.precondition_mode or not self.precondition_state:
            raise ConstraintError("HIT preconditions (mode, state) are mandatory")
        if self.delay_s < 0:
            raise ConstraintError("HIT delay_s must be >= 0")


@dataclass(frozen=True)
class Wind:
    speed: str = "NONE"
    direction: str = "NORTH"

    def key(self) -> str:
        """Stable token used in blueprint file names and profile rows."""
        if self.speed == "NONE":
            return "NONE"
        return f"{self.speed}-{self.direction}"


@dataclass(frozen=True)
class RoleScript:
    """One role's locally ordered task list and the device it acts through."""

    role: str
    interaction_device: str
    hits: tuple[HIT, ...]


@dataclass(frozen=True)
class FuzzTest:
    """A single executable test (mission + environment + per-role scripts)."""

    test_id: str
    mission: str
    wind: Wind
    drone_config: Mapping[str, Mapping[str, str]]
    roles: tuple[RoleScript, ...]
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for drone, params in self.drone_config.items():
            check_geofence_params(params, where=f"drone {drone}")

    def all_hits(self) -> list[tuple[str, HIT]]:
        """(role, hit) pairs in document order (role order, then local order)."""
        return [(script.role, hit) for script in self.roles for hit in script.hits]

    def geofence_params(self, drone: str) -> tuple[str, str, str]:
        params = self.drone_config.get(drone, {})
        return (
            params.get(PARAM_GEOFENCE_STAT, "Off"),
            params.get(PARAM_GEOFENCE_PRED, "Off"),
            params.get(PARAM_GEOFENCE_ACT, "None"),
        )

    def throttle_init(self, drone: str) -> str:
        return self.drone_config.get(drone, {}).get(PARAM_THROTTLE_INIT, "Neutral")

    def primary_drone(self) -> str:
        for _, hit in self.all_hits():
            if hit.drones:
                return hit.drones[0]
        if self.drone_config:
            return next(iter(self.drone_config))
        return "BLUE"


def check_geofence_params(params: Mapping[str, str], where: str = "config") -> None:
    """Enforce the geofence implication: Pred=On => Stat=On, Act!=None => Stat=On."""
    stat = params.get(PARAM_GEOFENCE_STAT, "Off")
    pred = params.get(PARAM_GEOFENCE_PRED, "Off")
    act = params.get(PARAM_GEOFENCE_ACT, "None")
    if stat not in ("On", "Off") or pred not in ("On", "Off"):
        raise ConstraintError(f"{where}: geofence status/prediction must be On/Off")
    if act not in vocab.GEOFENCE_ACTIONS:
        raise ConstraintError(f"{where}: unknown geofence action {act!r}")
    if pred == "On" and stat != "On":
        raise ConstraintError(f"{where}: geofence prediction requires geofence status On")
    if act != "None" and stat != "On":
        raise ConstraintError(f"{where}: geofence action {act} requires geofence status On")


def legal_geofence_combos(
    stats: tuple[str, ...] = ("Off", "On"),
    preds: tuple[str, ...] = ("Off", "On"),
    actions: tuple[str, ...] = tuple(vocab.GEOFENCE_ACTIONS),
) -> list[tuple[str, str, str]]:
    """All (status, prediction, action) triples satisfying the implication.

    Over the full raw 2x2x6 product this yields exactly 13 combinations:
    one with the fence off, and 2x6 with it on.
    """
    combos = []
    for stat in stats:
        for pred in preds:
            for act in actions:
                try:
                    check_geofence_params(
                        {
                            PARAM_GEOFENCE_STAT: stat,
                            PARAM_GEOFENCE_PRED: pred,
                            PARAM_GEOFENCE_ACT: act,
                        }
                    )
                except ConstraintError:
                    continue
                combos.append((stat, pred, act))
    return combos


@dataclass(frozen=True)
class TaskTemplate:
    """A task kind with its allowed argument values and precondition sets."""

    kind: str
    arguments: tuple[str, ...]
    precondition_modes: tuple[str, ...]
    precondition_states: tuple[str, ...]


@dataclass(frozen=True)
class FuzzSpace:
    """The declared feature space every generated test draws from."""

    name: str
    roles: tuple[str, ...]
    interaction_devices: tuple[str, ...]
    drones: Mapping[str, Mapping[str, str]]
    parameters: Mapping[str, tuple[str, ...]]
    environment: Mapping[str, tuple[str, ...]]
    missions: Mapping[str, Mission]
    modes: tuple[str, ...]
    states: tuple[str, ...]
    tasks: Mapping[str, TaskTemplate]

    def __post_init__(self) -> None:
        named_sets = {
            "Roles": self.roles,
            "Interaction_Devices": self.interaction_devices,
            "Drones": tuple(self.drones),
            "Missions": tuple(self.missions),
            "Modes": self.modes,
            "States": self.states,
            "Tasks": tuple(self.tasks),
        }
        for label, values in named_sets.items():
            if not values:
                raise ConsistencyError(f"space set {label} is empty")
            if len(set(values)) != len(values):
                raise ConsistencyError(f"space set {label} has duplicate identifiers")
        for label, values in {**dict(self.parameters), **dict(self.environment)}.items():
            if not values:
                raise ConsistencyError(f"value list for {label} is empty")
            if len(set(values)) != len(values):
                raise ConsistencyError(f"value list for {label} has duplicates")
        for template in self.tasks.values():
            for mode in template.precondition_modes:
                if mode not in self.modes:
                    raise ConsistencyError(
                        f"task {template.kind} precondition mode {mode!r} not in Modes"
                    )
            for state in template.precondition_states:
                if state not in self.states:
                    raise ConsistencyError(
                        f"task {template.kind} precondition state {state!r} not in States"
                    )
            if template.kind in vocab.ARGUMENT_TASKS and not template.arguments:
                raise ConsistencyError(f"task {template.kind} needs argument values")

    @property
    def throttle_positions(self) -> tuple[str, ...]:
        return self.parameters.get(PARAM_THROTTLE_INIT, ())

    def wind_options(self) -> list[Wind]:
        speeds = self.environment.get("Wind_Speed", ("NONE",))
        directions = self.environment.get("Wind_Direction", ("NORTH",))
        return [Wind(s, d) for s in speeds for d in directions]

    def geofence_combos(self) -> list[tuple[str, str, str]]:
        return legal_geofence_combos(
            self.parameters.get(PARAM_GEOFENCE_STAT, ("Off", "On")),
            self.parameters.get(PARAM_GEOFENCE_PRED, ("Off", "On")),
            self.parameters.get(PARAM_GEOFENCE_ACT, tuple(vocab.GEOFENCE_ACTIONS)),
        )
