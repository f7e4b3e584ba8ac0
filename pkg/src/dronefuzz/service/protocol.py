"""Live-session wire protocol: newline-delimited JSON messages.

One message per line:

    {"dir": "to_console", "kind": "Plan", "seq": 4, "t": 9.9, "payload": {...}}

``dir``      direction, ``to_console`` (server -> operator) or ``from_console``
``kind``     message kind; each direction has its own allowed set
``seq``      per-direction sequence number, strictly increasing from 0
``t``        sender timestamp (simulation seconds on the server side)
``payload``  kind-specific object

Kinds and payloads:

  Precheck          {test_id, mission, wind, safety_notes, roles: [{role,
                     interaction_device, tasks: [{hit_id, task, mode, state}]}],
                     expected_acks: [role, ...]}
  RoleAck           {role}
  Plan              {role, hit_id, task, mode, state}
  Go                {role, hit_id, task, expected_control}
  Control           {role, control}        control as a manual-input document
  NoMoreTasks       {}
  AwarenessQuestion {question_id, text}
  AwarenessAnswer   {question_id, answer}
  Telemetry         {t, x, y, z, vx, vy, vz, mode, lifecycle, armed,
                     motors_on, distance_home, fence_breached}
  TestResult        {test_id, outcome, aborted, features}
  Heartbeat         {}
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import SchemaError
from ..simulator.types import ControlInput

DIR_TO_CONSOLE = "to_console"
DIR_FROM_CONSOLE = "from_console"

KINDS_TO_CONSOLE = (
    "Precheck",
    "Plan",
    "Go",
    "NoMoreTasks",
    "AwarenessQuestion",
    "Telemetry",
    "TestResult",
    "Heartbeat",
)
KINDS_FROM_CONSOLE = ("RoleAck", "AwarenessAnswer", "Control", "Heartbeat")


@dataclass(frozen=True)
class SessionMessage:
    direction: str
    kind: str
    seq: int
    timestamp: float
    payload: dict


def encode_message(message: SessionMessage) -> str:
    return json.dumps(
        {
            "dir": message.direction,
            "kind": message.kind,
            "seq": message.seq,
            "t": message.timestamp,
            "payload": message.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
    )


def decode_message(line: str | bytes) -> SessionMessage:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad session message: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("session message must be an object")
    unknown = set(doc) - {"dir", "kind", "seq", "t", "payload"}
    if unknown:
        raise SchemaError(f"session message: unknown fields {sorted(unknown)}")
    direction = doc.get("dir")
    kind = doc.get("kind")
    if direction == DIR_TO_CONSOLE:
        allowed = KINDS_TO_CONSOLE
    elif direction == DIR_FROM_CONSOLE:
        allowed = KINDS_FROM_CONSOLE
    else:
        raise SchemaError(f"bad message direction {direction!r}")
    if kind not in allowed:
        raise SchemaError(f"kind {kind!r} not allowed for direction {direction}")
    seq = doc.get("seq")
    if not isinstance(seq, int) or seq < 0:
        raise SchemaError("message seq must be a non-negative integer")
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise SchemaError("message payload must be an object")
    if kind == "Control":
        # Reject controls that would not decode into a valid manual input.
        ControlInput.from_document(payload.get("control", {}))
    return SessionMessage(
        direction=direction,
        kind=kind,
        seq=seq,
        timestamp=float(doc.get("t", 0.0)),
        payload=payload,
    )
