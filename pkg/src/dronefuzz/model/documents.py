"""Parsing and serialization of space and test documents.

Both document kinds are JSON. Key names are the schema contract; unknown
keys are rejected rather than ignored so that drift between a corpus and the
code fails loudly instead of silently changing test semantics.

Test documents follow this shape (single-drone test with one scripted role):

    {
      "Test_ID": "t000001",
      "Mission": "BASIC-WAYPOINTS",
      "Environment": {"Wind": {"SPEED": "MEDIUM", "DIRECTION": "NORTH"}},
      "Drone_Config": {"BLUE": {"Geofence_Stat": "On", ...}},
      "Roles": [
        {"Role": "RPIC",
         "HITS": [{"ID": "1", "Drones": ["BLUE"],
                   "Task": "SET MODE TO STABILIZED",
                   "Mode": "OFFBOARD", "State": "FLYING"}],
         "Interaction_Device": "RC TRANSMITTER"}
      ]
    }

``Delay`` (seconds) and ``Params`` (extra precondition parameters) are
optional per HIT; ``Metadata`` is optional at the top level.
"""

from __future__ import annotations

import hashlib
import json
from typing import Mapping

from ..errors import SchemaError
from ..simulator.mission import Mission
from . import vocab
from .types import (
    HIT,
    FuzzSpace,
    FuzzTest,
    RoleScript,
    Task,
    TaskTemplate,
    Wind,
)

_SPACE_KEYS = {
    "Name",
    "Roles",
    "Interaction_Devices",
    "Drones",
    "Parameters",
    "Environment",
    "Missions",
    "Modes",
    "States",
    "Tasks",
}
_TEST_KEYS = {"Test_ID", "Mission", "Environment", "Drone_Config", "Roles", "Metadata"}
_ROLE_KEYS = {"Role", "HITS", "Interaction_Device"}
_HIT_KEYS = {"ID", "Drones", "Task", "Mode", "State", "Delay", "Params"}
_TASK_TEMPLATE_KEYS = {"Arguments", "Modes", "States"}


def _load_json(document: str | bytes | Mapping) -> dict:
    if isinstance(document, Mapping):
        return dict(document)
    try:
        loaded = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise SchemaError("document root must be an object")
    return loaded


def _reject_unknown(doc, allowed: set, where: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(doc) - allowed
    if unknown:
        raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")


def _require(doc: Mapping, key: str, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return doc[key]


def _require_str(doc: Mapping, key: str, where: str) -> str:
    value = _require(doc, key, where)
    if not isinstance(value, str):
        raise SchemaError(f"{where}: field {key!r} must be a string")
    return value


def _string_list(value, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"{where}: expected a list of strings")
    return tuple(value)


# --- fuzz space ---------------------------------------------------------------


def parse_fuzz_space(document: str | bytes | Mapping) -> FuzzSpace:
    """Parse and validate a fuzz-space document.

    Raises SchemaError for malformed structure and ConsistencyError (via the
    FuzzSpace invariants) for internally inconsistent content.
    """
    doc = _load_json(document)
    _reject_unknown(doc, _SPACE_KEYS, "space")

    missions = {}
    missions_doc = _require(doc, "Missions", "space")
    if not isinstance(missions_doc, dict):
        raise SchemaError("space: Missions must be an object")
    for name, mission_doc in missions_doc.items():
        try:
            missions[name] = Mission.from_document(name, mission_doc)
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(f"space: bad mission {name!r}: {exc}") from exc

    parameters_doc = _require(doc, "Parameters", "space")
    if not isinstance(parameters_doc, dict):
        raise SchemaError("space: Parameters must be an object")
    parameters = {}
    for name, values in parameters_doc.items():
        values = _string_list(values, f"space parameter {name}")
        if name == "Throttle_Init":
            values = tuple(vocab.canonical_throttle(v) for v in values)
        elif name == "Geofence_Act":
            values = tuple(vocab.canonical_action(v) for v in values)
        parameters[name] = values

    environment_doc = _require(doc, "Environment", "space")
    if not isinstance(environment_doc, dict):
        raise SchemaError("space: Environment must be an object")
    environment = {
        name: _string_list(values, f"space environment {name}")
        for name, values in environment_doc.items()
    }

    modes = tuple(
        vocab.canonical_mode(m) for m in _string_list(_require(doc, "Modes", "space"), "Modes")
    )
    states = tuple(
        vocab.canonical_state(s) for s in _string_list(_require(doc, "States", "space"), "States")
    )

    tasks_doc = _require(doc, "Tasks", "space")
    if not isinstance(tasks_doc, dict):
        raise SchemaError("space: Tasks must be an object")
    tasks = {}
    for kind, template_doc in tasks_doc.items():
        if kind not in vocab.TASK_KINDS:
            raise SchemaError(f"space: unknown task kind {kind!r}")
        if not isinstance(template_doc, dict):
            raise SchemaError(f"space: task {kind} must be an object")
        _reject_unknown(template_doc, _TASK_TEMPLATE_KEYS, f"space task {kind}")
        arguments = _string_list(template_doc.get("Arguments", []), f"task {kind} Arguments")
        if kind == vocab.TASK_CHANGE_MODE:
            arguments = tuple(vocab.canonical_mode(a) for a in arguments)
        elif kind == vocab.TASK_MOVE_THROTTLE:
            arguments = tuple(vocab.canonical_throttle(a) for a in arguments)
        pre_modes = tuple(
            vocab.canonical_mode(m)
            for m in _string_list(template_doc.get("Modes", list(modes)), f"task {kind} Modes")
        )
        pre_states = tuple(
            vocab.canonical_state(s)
            for s in _string_list(template_doc.get("States", list(states)), f"task {kind} States")
        )
        tasks[kind] = TaskTemplate(kind, arguments, pre_modes, pre_states)

    drones_doc = _require(doc, "Drones", "space")
    if not isinstance(drones_doc, dict):
        raise SchemaError("space: Drones must be an object")

    return FuzzSpace(
        name=str(doc.get("Name", "unnamed")),
        roles=_string_list(_require(doc, "Roles", "space"), "Roles"),
        interaction_devices=tuple(
            vocab.canonical_device(d)
            for d in _string_list(_require(doc, "Interaction_Devices", "space"), "Interaction_Devices")
        ),
        drones={name: dict(props) for name, props in drones_doc.items()},
        parameters=parameters,
        environment=environment,
        missions=missions,
        modes=modes,
        states=states,
        tasks=tasks,
    )


def serialize_space(space: FuzzSpace) -> str:
    doc = {
        "Name": space.name,
        "Roles": list(space.roles),
        "Interaction_Devices": list(space.interaction_devices),
        "Drones": {name: dict(props) for name, props in space.drones.items()},
        "Parameters": {name: list(values) for name, values in space.parameters.items()},
        "Environment": {name: list(values) for name, values in space.environment.items()},
        "Missions": {name: mission.to_document() for name, mission in space.missions.items()},
        "Modes": list(space.modes),
        "States": list(space.states),
        "Tasks": {
            kind: {
                "Arguments": list(t.arguments),
                "Modes": list(t.precondition_modes),
                "States": list(t.precondition_states),
            }
            for kind, t in space.tasks.items()
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def space_hash(space: FuzzSpace) -> str:
    """Stable digest of a space, recorded in corpus headers for provenance."""
    return hashlib.sha256(serialize_space(space).encode()).hexdigest()[:16]


# --- task phrases -------------------------------------------------------------


def parse_task_phrase(phrase: str) -> Task:
    """Parse a document task string like ``SET MODE TO STABILIZED``."""
    if not isinstance(phrase, str):
        raise SchemaError("task must be a string")
    text = " ".join(phrase.strip().split())
    upper = text.upper()
    if upper.startswith("SET MODE TO "):
        return Task(vocab.TASK_CHANGE_MODE, vocab.canonical_mode(text[12:]))
    if upper.startswith("CHANGE MODE TO "):
        return Task(vocab.TASK_CHANGE_MODE, vocab.canonical_mode(text[15:]))
    if upper.startswith("MOVE THROTTLE TO "):
        return Task(vocab.TASK_MOVE_THROTTLE, vocab.canonical_throttle(text[17:]))
    if upper in ("PRESS KILL SWITCH", "KILL MOTORS", "HOLD KILL SWITCH"):
        return Task(vocab.TASK_KILL_MOTORS)
    if upper == "PRESS RTL BUTTON":
        return Task(vocab.TASK_PRESS_RTL)
    if upper == "PRESS LAND BUTTON":
        return Task(vocab.TASK_PRESS_LAND)
    raise SchemaError(f"unrecognized task phrase {phrase!r}")


# --- tests --------------------------------------------------------------------


def parse_test(document: str | bytes | Mapping) -> FuzzTest:
    """Parse a test document; raises SchemaError / ConstraintError."""
    doc = _load_json(document)
    _reject_unknown(doc, _TEST_KEYS, "test")

    mission = _require(doc, "Mission", "test")
    if not isinstance(mission, str):
        raise SchemaError("test: Mission must be a string")

    wind = Wind()
    environment = doc.get("Environment", {})
    if not isinstance(environment, dict):
        raise SchemaError("test: Environment must be an object")
    _reject_unknown(environment, {"Wind"}, "test Environment")
    if "Wind" in environment:
        wind_doc = environment["Wind"]
        _reject_unknown(wind_doc, {"SPEED", "DIRECTION"}, "test Environment.Wind")
        wind = Wind(
            speed=vocab.canonical_wind_speed(_require(wind_doc, "SPEED", "Wind")),
            direction=str(_require(wind_doc, "DIRECTION", "Wind")).strip().upper(),
        )

    drone_config = {}
    config_doc = doc.get("Drone_Config", {})
    if not isinstance(config_doc, dict):
        raise SchemaError("test: Drone_Config must be an object")
    for drone, params in config_doc.items():
        if not isinstance(params, dict):
            raise SchemaError(f"test: Drone_Config[{drone!r}] must be an object")
        cleaned = {}
        for key, value in params.items():
            if key == "Throttle_Init":
                cleaned[key] = vocab.canonical_throttle(str(value))
            elif key == "Geofence_Act":
                cleaned[key] = vocab.canonical_action(value)
            else:
                cleaned[key] = str(value)
        drone_config[drone] = cleaned

    roles = []
    roles_doc = _require(doc, "Roles", "test")
    if not isinstance(roles_doc, list):
        raise SchemaError("test: Roles must be a list")
    for i, role_doc in enumerate(roles_doc):
        _reject_unknown(role_doc, _ROLE_KEYS, f"test Roles[{i}]")
        hits = []
        hits_doc = _require(role_doc, "HITS", f"Roles[{i}]")
        if not isinstance(hits_doc, list):
            raise SchemaError(f"test Roles[{i}]: HITS must be a list")
        for j, hit_doc in enumerate(hits_doc):
            _reject_unknown(hit_doc, _HIT_KEYS, f"test Roles[{i}].HITS[{j}]")
            params_doc = hit_doc.get("Params", {})
            if not isinstance(params_doc, dict):
                raise SchemaError(f"test Roles[{i}].HITS[{j}]: Params must be an object")
            try:
                delay_s = float(hit_doc.get("Delay", 0.0))
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"test Roles[{i}].HITS[{j}]: bad Delay") from exc
            hits.append(
                HIT(
                    hit_id=str(_require(hit_doc, "ID", "HIT")),
                    drones=_string_list(_require(hit_doc, "Drones", "HIT"), "HIT Drones"),
                    task=parse_task_phrase(_require(hit_doc, "Task", "HIT")),
                    precondition_mode=vocab.canonical_mode(_require_str(hit_doc, "Mode", "HIT")),
                    precondition_state=vocab.canonical_state(_require_str(hit_doc, "State", "HIT")),
                    precondition_params={str(k): str(v) for k, v in params_doc.items()},
                    delay_s=delay_s,
                )
            )
        roles.append(
            RoleScript(
                role=str(_require(role_doc, "Role", f"Roles[{i}]")),
                interaction_device=vocab.canonical_device(
                    _require(role_doc, "Interaction_Device", f"Roles[{i}]")
                ),
                hits=tuple(hits),
            )
        )

    metadata = doc.get("Metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("test: Metadata must be an object")

    return FuzzTest(
        test_id=str(doc.get("Test_ID", "unnamed")),
        mission=mission,
        wind=wind,
        drone_config=drone_config,
        roles=tuple(roles),
        metadata=metadata,
    )


def document_from_test(test: FuzzTest) -> dict:
    doc: dict = {
        "Test_ID": test.test_id,
        "Mission": test.mission,
        "Environment": {
            "Wind": {"SPEED": test.wind.speed, "DIRECTION": test.wind.direction}
        },
        "Drone_Config": {d: dict(p) for d, p in test.drone_config.items()},
        "Roles": [
            {
                "Role": script.role,
                "HITS": [
                    _hit_to_document(hit) for hit in script.hits
                ],
                "Interaction_Device": script.interaction_device,
            }
            for script in test.roles
        ],
    }
    if test.metadata:
        doc["Metadata"] = dict(test.metadata)
    return doc


def _hit_to_document(hit: HIT) -> dict:
    doc = {
        "ID": hit.hit_id,
        "Drones": list(hit.drones),
        "Task": hit.task.phrase(),
        "Mode": hit.precondition_mode,
        "State": hit.precondition_state,
        "Delay": hit.delay_s,
    }
    if hit.precondition_params:
        doc["Params"] = dict(hit.precondition_params)
    return doc


def serialize_test(test: FuzzTest, compact: bool = True) -> str:
    doc = document_from_test(test)
    if compact:
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)
    return json.dumps(doc, indent=2)
