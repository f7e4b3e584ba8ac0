"""Canonical vocabulary for modes, lifecycle states, throttle detents and tasks.

Documents in the wild spell these tokens several ways (``FLYING`` vs ``Fly``,
``POSCTRL`` vs ``POSCTL``, ``+1`` vs ``MaxHIGH``); parsing canonicalizes known
aliases and leaves unknown tokens untouched so that space validation can flag
them instead of the parser guessing.
"""

from __future__ import annotations

MODES = (
    "STABILIZED",
    "ALTCTL",
    "POSCTL",
    "OFFBOARD",
    "AUTO.LOITER",
    "AUTO.RTL",
    "AUTO.LAND",
)

STATES = ("Pre-arm", "Arm", "Takeoff", "Fly", "Hover", "Land")

# Detent name -> normalized stick level in [-1, +1].
THROTTLE_LEVELS = {
    "MaxLOW": -1.0,
    "MedLOW": -0.5,
    "JustBelow": -0.1,
    "Neutral": 0.0,
    "JustAbove": 0.1,
    "MedHIGH": 0.5,
    "MaxHIGH": 1.0,
}
THROTTLE_POSITIONS = tuple(THROTTLE_LEVELS)

# Geofence breach action name -> wire code.
GEOFENCE_ACTIONS = {
    "None": 0,
    "Warning": 1,
    "Hold": 2,
    "Return": 3,
    "Terminate": 4,
    "Land": 5,
}

WIND_SPEEDS = ("NONE", "MEDIUM", "HIGH")
WIND_DIRECTIONS = ("NORTH", "SOUTH", "EAST", "WEST")

TASK_CHANGE_MODE = "CHANGE-MODE"
TASK_MOVE_THROTTLE = "MOVE-THROTTLE"
TASK_KILL_MOTORS = "KILL-MOTORS"
TASK_PRESS_RTL = "PRESS-RTL"
TASK_PRESS_LAND = "PRESS-LAND"

TASK_KINDS = (
    TASK_CHANGE_MODE,
    TASK_MOVE_THROTTLE,
    TASK_KILL_MOTORS,
    TASK_PRESS_RTL,
    TASK_PRESS_LAND,
)

# Task kinds whose template must declare a non-empty argument list.
ARGUMENT_TASKS = (TASK_CHANGE_MODE, TASK_MOVE_THROTTLE)

DEVICE_RC = "RC TRANSMITTER"
DEVICE_GUI = "GUI"

_MODE_ALIASES = {
    "ALTCTRL": "ALTCTL",
    "ALTHOLD": "ALTCTL",
    "POSCTRL": "POSCTL",
    "POSITION": "POSCTL",
    "LOITER": "AUTO.LOITER",
    "AUTO.LOITER": "AUTO.LOITER",
    "RTL": "AUTO.RTL",
    "AUTO.RTL": "AUTO.RTL",
    "LAND": "AUTO.LAND",
    "AUTO.LAND": "AUTO.LAND",
}

_STATE_ALIASES = {
    "PRE-ARM": "Pre-arm",
    "PREARM": "Pre-arm",
    "ARM": "Arm",
    "ARMING": "Arm",
    "TAKEOFF": "Takeoff",
    "TAKING-OFF": "Takeoff",
    "FLY": "Fly",
    "FLYING": "Fly",
    "HOVER": "Hover",
    "HOVERING": "Hover",
    "LAND": "Land",
    "LANDING": "Land",
}

_THROTTLE_ALIASES = {
    "MAXIMUM LOW": "MaxLOW",
    "MEDIUM LOW": "MedLOW",
    "JUST BELOW NEUTRAL": "JustBelow",
    "NEUTRAL": "Neutral",
    "JUST ABOVE NEUTRAL": "JustAbove",
    "MEDIUM HIGH": "MedHIGH",
    "MAXIMUM HIGH": "MaxHIGH",
    "-1": "MaxLOW",
    "-0.5": "MedLOW",
    "-0.1": "JustBelow",
    "0": "Neutral",
    "+0.1": "JustAbove",
    "+0.5": "MedHIGH",
    "+1": "MaxHIGH",
}

_ACTION_ALIASES = {str(code): name for name, code in GEOFENCE_ACTIONS.items()}

_DEVICE_ALIASES = {
    "RC-TRANSMITTER": DEVICE_RC,
    "RC TRANSMITTER": DEVICE_RC,
    "RC": DEVICE_RC,
    "GUI": DEVICE_GUI,
}

_WIND_SPEED_ALIASES = {"CALM": "NONE", "OFF": "NONE"}


def canonical_mode(token: str) -> str:
    up = token.strip().upper()
    if up in MODES:
        return up
    return _MODE_ALIASES.get(up, token.strip())


def canonical_state(token: str) -> str:
    return _STATE_ALIASES.get(token.strip().upper(), token.strip())


def canonical_throttle(token: str) -> str:
    stripped = token.strip()
    if stripped in THROTTLE_LEVELS:
        return stripped
    return _THROTTLE_ALIASES.get(stripped.upper(), stripped)


def canonical_action(token: str) -> str:
    stripped = str(token).strip()
    if stripped in GEOFENCE_ACTIONS:
        return stripped
    titled = stripped.title()
    if titled in GEOFENCE_ACTIONS:
        return titled
    return _ACTION_ALIASES.get(stripped, stripped)


def canonical_device(token: str) -> str:
    return _DEVICE_ALIASES.get(token.strip().upper(), token.strip())


def canonical_wind_speed(token: str) -> str:
    up = str(token).strip().upper()
    return _WIND_SPEED_ALIASES.get(up, up)


def throttle_level(position: str) -> float:
    """Numeric stick level for a canonical detent name."""
    return THROTTLE_LEVELS[canonical_throttle(position)]
