"""Static test validation: space references and precondition reachability.

Reachability is judged against the mission's nominal lifecycle trajectory
(flown autonomously in OFFBOARD) overlaid with the mode changes earlier
tasks in the same test would induce. The analysis is deliberately
optimistic: it may flag a pair reachable that a particular run never visits
(e.g. a manual-mode landing that would require a low throttle), but any
pair the simulator actually reaches is flagged reachable. Tests with an
unreachable precondition are expected to finish Invalid-Untested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import vocab
from .types import FuzzSpace, FuzzTest, PARAM_THROTTLE_INIT

MANUAL_MODES = ("STABILIZED", "ALTCTL", "POSCTL")


@dataclass(frozen=True)
class HitCheck:
    role: str
    hit_id: str
    reachable: bool
    reason: str


@dataclass(frozen=True)
class ValidityReport:
    test_id: str
    reference_errors: tuple[str, ...]
    hit_checks: tuple[HitCheck, ...]

    @property
    def potentially_invalid(self) -> bool:
        return bool(self.reference_errors) or any(not c.reachable for c in self.hit_checks)


def nominal_pairs(space: FuzzSpace, mission_name: str) -> list[tuple[str, str]]:
    """(mode, state) sequence of the nominal autonomous run of a mission."""
    mission = space.missions[mission_name]
    seq = [("OFFBOARD", "Pre-arm"), ("OFFBOARD", "Arm"), ("OFFBOARD", "Takeoff")]
    for _ in mission.waypoints:
        seq.append(("OFFBOARD", "Fly"))
        seq.append(("OFFBOARD", "Hover"))
    seq.append(("OFFBOARD", "Fly"))  # return leg
    seq.append(("OFFBOARD", "Land"))
    return seq


@dataclass
class _Trajectory:
    """Over-approximate tail of reachable (mode, state) pairs during the walk."""

    pairs: list[tuple[str, str]]
    extras: list[tuple[str, str]] = field(default_factory=list)
    terminal: bool = False

    def find(self, mode: str, state: str) -> int | None:
        for idx, pair in enumerate(self.pairs):
            if pair == (mode, state):
                return idx
        if (mode, state) in self.extras:
            return len(self.pairs)
        return None


def _apply_task_effect(
    traj: _Trajectory,
    fired_at: int,
    fired_pair: tuple[str, str],
    task_kind: str,
    argument: str | None,
) -> _Trajectory:
    remaining = traj.pairs[fired_at:] if fired_at < len(traj.pairs) else []
    state_here = fired_pair[1]

    if task_kind == vocab.TASK_KILL_MOTORS:
        # The vehicle falls; only the crash-landing contact remains observable.
        mode_here = fired_pair[0]
        return _Trajectory(pairs=[], extras=[(mode_here, state_here), (mode_here, "Land")], terminal=True)

    if task_kind == vocab.TASK_MOVE_THROTTLE:
        return _Trajectory(pairs=remaining, extras=list(traj.extras))

    target = argument
    if task_kind == vocab.TASK_PRESS_RTL:
        target = "AUTO.RTL"
    elif task_kind == vocab.TASK_PRESS_LAND:
        target = "AUTO.LAND"

    if target == "OFFBOARD":
        # The autonomous pilot resumes (or was never interrupted).
        return _Trajectory(pairs=remaining, extras=list(traj.extras))
    if target in MANUAL_MODES:
        # Lifecycle freezes; a manual landing stays possible.
        return _Trajectory(pairs=[], extras=[(target, state_here), (target, "Land")])
    if target == "AUTO.LOITER":
        return _Trajectory(pairs=[], extras=[(target, "Hover")])
    if target == "AUTO.RTL":
        return _Trajectory(pairs=[], extras=[(target, "Fly"), (target, "Land")])
    if target == "AUTO.LAND":
        return _Trajectory(pairs=[], extras=[(target, "Land")])
    return _Trajectory(pairs=remaining, extras=list(traj.extras))


def validate_test(test: FuzzTest, space: FuzzSpace) -> ValidityReport:
    """Check space references and per-HIT precondition reachability.

    Always returns a report; parse errors aside, a test is never rejected
    here because an unreachable precondition is itself a legitimate (if
    untestable) fuzz outcome.
    """
    errors = []
    if test.mission not in space.missions:
        errors.append(f"mission {test.mission!r} not in space")
    if test.wind.speed not in space.environment.get("Wind_Speed", ()):
        errors.append(f"wind speed {test.wind.speed!r} not in space")
    if test.wind.direction not in space.environment.get("Wind_Direction", ()):
        errors.append(f"wind direction {test.wind.direction!r} not in space")

    for drone, params in test.drone_config.items():
        if drone not in space.drones:
            errors.append(f"drone {drone!r} not in space")
        for key, value in params.items():
            allowed = space.parameters.get(key)
            if allowed is None:
                errors.append(f"parameter {key!r} not in space")
            elif value not in allowed:
                errors.append(f"value {value!r} not allowed for parameter {key}")

    for script in test.roles:
        if script.role not in space.roles:
            errors.append(f"role {script.role!r} not in space")
        if script.interaction_device not in space.interaction_devices:
            errors.append(f"device {script.interaction_device!r} not in space")
        for hit in script.hits:
            if hit.precondition_mode not in space.modes:
                errors.append(f"HIT {hit.hit_id}: mode {hit.precondition_mode!r} not in space")
            if hit.precondition_state not in space.states:
                errors.append(f"HIT {hit.hit_id}: state {hit.precondition_state!r} not in space")
            for drone in hit.drones:
                if drone not in space.drones:
                    errors.append(f"HIT {hit.hit_id}: drone {drone!r} not in space")
            template = space.tasks.get(hit.task.kind)
            if template is None:
                if hit.task.kind not in (vocab.TASK_PRESS_RTL, vocab.TASK_PRESS_LAND):
                    errors.append(f"HIT {hit.hit_id}: task {hit.task.kind!r} not in space")
            elif hit.task.argument is not None and hit.task.argument not in template.arguments:
                errors.append(
                    f"HIT {hit.hit_id}: argument {hit.task.argument!r} not allowed for {hit.task.kind}"
                )

    checks = []
    if test.mission in space.missions:
        checks = _reachability_checks(test, space)

    return ValidityReport(
        test_id=test.test_id,
        reference_errors=tuple(errors),
        hit_checks=tuple(checks),
    )


def _params_consistent(test: FuzzTest, hit) -> bool:
    # Precondition parameters are matched against the static per-drone config.
    for key, wanted in hit.precondition_params.items():
        for drone in hit.drones or tuple(test.drone_config):
            have = test.drone_config.get(drone, {}).get(key)
            if key == PARAM_THROTTLE_INIT and have is None:
                have = "Neutral"
            if have != wanted:
                return False
    return True


def _reachability_checks(test: FuzzTest, space: FuzzSpace) -> list[HitCheck]:
    traj = _Trajectory(pairs=nominal_pairs(space, test.mission))
    checks = []
    for role, hit in test.all_hits():
        if traj.terminal:
            checks.append(HitCheck(role, hit.hit_id, False, "no flight remains after motor kill"))
            continue
        if not _params_consistent(test, hit):
            checks.append(
                HitCheck(role, hit.hit_id, False, "precondition parameters never match config")
            )
            continue
        idx = traj.find(hit.precondition_mode, hit.precondition_state)
        if idx is None:
            checks.append(
                HitCheck(
                    role,
                    hit.hit_id,
                    False,
                    f"({hit.precondition_mode}, {hit.precondition_state}) not on the "
                    "nominal trajectory given earlier tasks",
                )
            )
            continue
        checks.append(HitCheck(role, hit.hit_id, True, "reachable"))
        fired_pair = (hit.precondition_mode, hit.precondition_state)
        traj = _apply_task_effect(traj, idx, fired_pair, hit.task.kind, hit.task.argument)
    return checks
