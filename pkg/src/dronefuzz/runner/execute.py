"""Test execution: precondition monitoring, dispatch, and the tick loop."""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field

from ..errors import AgentUnavailable, RejectedInput
from ..model.types import (
    HIT,
    PARAM_THROTTLE_INIT,
    FuzzSpace,
    FuzzTest,
    TestOutcomeKind,
)
from ..simulator.flightlog import FlightLog
from ..simulator.types import DroneSetup, GeofenceConfig, VehicleState
from ..simulator.world import SIM_TIME_CAP, World
from .agents import ProxyHumanAgent

STATUS_PENDING = "Pending"
STATUS_PRECONDITION_MET = "PreconditionMet"
STATUS_DISPATCHED = "Dispatched"
STATUS_PERFORMED = "Performed"
STATUS_NEVER_MET = "NeverMet"


def precondition_met(hit: HIT, state: VehicleState, config: dict | None = None) -> bool:
    """True iff the vehicle's (mode, lifecycle) and the static config match."""
    if state.mode != hit.precondition_mode or state.lifecycle != hit.precondition_state:
        return False
    for key, wanted in hit.precondition_params.items():
        have = (config or {}).get(key)
        if have is None and key == PARAM_THROTTLE_INIT:
            have = "Neutral"
        if have != wanted:
            return False
    return True


def setup_from_test(test: FuzzTest, drone: str | None = None) -> DroneSetup:
    drone = drone or test.primary_drone()
    stat, pred, act = test.geofence_params(drone)
    params = test.drone_config.get(drone, {})
    return DroneSetup(
        geofence=GeofenceConfig.square(stat, pred, act),
        throttle_init=test.throttle_init(drone),
        arm_neutral_throttle=params.get("Arm_Neutral_Throttle", "Off") == "On",
    )


@dataclass
class HitStatus:
    role: str
    hit: HIT
    status: str = STATUS_PENDING
    precondition_met_time: float | None = None
    dispatched_time: float | None = None
    performed_time: float | None = None
    performed_control: dict | None = None
    stale_precondition: bool = False


@dataclass
class TestExecution:
    test: FuzzTest
    hit_statuses: list[HitStatus] = field(default_factory=list)
    log: FlightLog | None = None
    outcome: TestOutcomeKind | None = None
    aborted: bool = False
    abort_reason: str = ""
    annotations: dict = field(default_factory=dict)

    def never_met(self) -> bool:
        return any(s.status == STATUS_NEVER_MET for s in self.hit_statuses)


def execute_test(
    test: FuzzTest,
    agent=None,
    space: FuzzSpace | None = None,
    max_time: float = SIM_TIME_CAP,
    pace_s: float = 0.0,
) -> TestExecution:
    """Run one test in a fresh world, dispatching tasks through the agent.

    Tasks of one role are dispatched strictly in their local order: while a
    task is dispatched but not yet performed, that role's later tasks are not
    even scanned, however long the operator takes. ``pace_s`` throttles the
    loop to soft real time (seconds of wall clock per tick) for live
    sessions; zero runs as fast as possible.
    """
    agent = agent or ProxyHumanAgent()
    drone = test.primary_drone()
    mission = (
        space.missions[test.mission]
        if space is not None and test.mission in space.missions
        else _builtin_mission(test.mission)
    )
    allowed_modes = space.modes if space is not None else None

    execution = TestExecution(test=test)
    queues: dict[str, list[HitStatus]] = {}
    for script in test.roles:
        role_queue = []
        for hit in script.hits:
            status = HitStatus(role=script.role, hit=hit)
            execution.hit_statuses.append(status)
            role_queue.append(status)
        queues[script.role] = role_queue

    world = World(
        mission,
        setup=setup_from_test(test, drone),
        wind=(test.wind.speed, test.wind.direction),
        allowed_modes=allowed_modes or tuple(_DEFAULT_MODES),
        meta={"test_id": test.test_id},
    )
    config = dict(test.drone_config.get(drone, {}))

    agent.begin_test(test)
    no_more_sent = False
    try:
        while not world.done and world.state.time < max_time:
            for role, control in agent.poll_controls(world):
                awaiting = _awaiting_perform(queues.get(role, []))
                still_holds = awaiting is not None and precondition_met(
                    awaiting.hit, world.state, config
                )
                try:
                    world.apply_manual_control(control)
                except RejectedInput as exc:
                    execution.annotations.setdefault("rejected_controls", []).append(str(exc))
                    continue
                if awaiting is not None:
                    awaiting.status = STATUS_PERFORMED
                    awaiting.performed_time = world.state.time
                    awaiting.performed_control = control.to_document()
                    # A slow operator may act only after the gating condition
                    # has drifted; the run is kept, flagged, never blocked.
                    awaiting.stale_precondition = not still_holds

            if not no_more_sent and all(
                s.status == STATUS_PERFORMED for s in execution.hit_statuses
            ):
                no_more_sent = True
                agent.on_no_more_tasks(world)

            world.step()
            now = world.state.time

            for script in test.roles:
                queue = queues[script.role]
                current = _next_actionable(queue)
                if current is None:
                    continue
                if current.status == STATUS_PENDING and precondition_met(
                    current.hit, world.state, config
                ):
                    current.status = STATUS_PRECONDITION_MET
                    current.precondition_met_time = now
                    agent.on_precondition_met(world, script.role, current.hit)
                if (
                    current.status == STATUS_PRECONDITION_MET
                    and now >= current.precondition_met_time + current.hit.delay_s
                ):
                    current.status = STATUS_DISPATCHED
                    current.dispatched_time = now
                    agent.on_dispatch(world, script.role, current.hit)

            if pace_s > 0:
                _time.sleep(pace_s)
    except AgentUnavailable as exc:
        execution.aborted = True
        execution.abort_reason = str(exc)

    for status in execution.hit_statuses:
        if status.status in (STATUS_PENDING,):
            status.status = STATUS_NEVER_MET

    if not no_more_sent:
        agent.on_no_more_tasks(world)
    execution.log = world.log
    if not execution.aborted and execution.never_met():
        execution.outcome = TestOutcomeKind.INVALID_UNTESTED
    agent.end_test(execution)
    return execution


def _awaiting_perform(queue: list[HitStatus]) -> HitStatus | None:
    for status in queue:
        if status.status == STATUS_DISPATCHED:
            return status
        if status.status in (STATUS_PENDING, STATUS_PRECONDITION_MET):
            return None
    return None


def _next_actionable(queue: list[HitStatus]) -> HitStatus | None:
    for status in queue:
        if status.status == STATUS_DISPATCHED:
            # Local order: wait for this one to be performed first.
            return None
        if status.status in (STATUS_PENDING, STATUS_PRECONDITION_MET):
            return status
    return None


_DEFAULT_MODES = (
    "STABILIZED",
    "ALTCTL",
    "POSCTL",
    "OFFBOARD",
    "AUTO.LOITER",
    "AUTO.RTL",
    "AUTO.LAND",
)


def _builtin_mission(name: str):
    from ..data import builtin_text
    from ..model.documents import parse_fuzz_space

    space = parse_fuzz_space(builtin_text("space_default"))
    if name in space.missions:
        return space.missions[name]
    raise KeyError(f"unknown mission {name!r} and no space given")
