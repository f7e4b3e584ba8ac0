"""Deterministic discrete-time flight controller and vehicle surrogate.

One ``World`` simulates one vehicle flying one mission. The autonomous
pilot flies the mission in OFFBOARD; manual control inputs arrive only at
tick boundaries. All physics is a first-order velocity-command model: each
axis tracks its commanded velocity with time constant ``TRACK_TAU`` and
per-axis speed limits. There is no randomness anywhere in this module, so a
given (mission, setup, wind, control schedule) always produces a
byte-identical flight log.

Mode semantics:

  STABILIZED   no position or altitude hold; horizontal momentum decays
               slowly toward the wind vector; throttle commands vertical
               velocity (neutral holds hover thrust).
  ALTCTL       like STABILIZED horizontally (full wind drift); throttle
               commands vertical velocity with neutral holding altitude.
  POSCTL       full position hold, wind rejected; stick deflection commands
               horizontal velocity; throttle commands vertical velocity.
  OFFBOARD     the autonomous pilot tracks the mission trajectory; RC
               throttle/stick inputs are ignored (mode changes are not).
  AUTO.LOITER  hold the position captured at mode entry.
  AUTO.RTL     climb to the return altitude, fly home, land.
  AUTO.LAND    descend in place.

The kill switch cuts motor output irreversibly; an airborne vehicle then
falls ballistically.
"""

from __future__ import annotations

import math

from ..errors import RejectedInput
from ..model import vocab
from .flightlog import (
    EVENT_ARM,
    EVENT_BREACH,
    EVENT_DISARM,
    EVENT_EARLY_LANDING,
    EVENT_FAILSAFE,
    EVENT_FREEFALL,
    EVENT_HARD_LANDING,
    EVENT_MANUAL_CONTROL,
    EVENT_MISSION_COMPLETE,
    EVENT_TIMEOUT,
    EVENT_TOUCHDOWN,
    FlightLog,
    LogEvent,
    Sample,
)
from .mission import Mission
from .types import (
    CONTROL_KILL_MOTORS,
    CONTROL_SET_MODE,
    CONTROL_SET_STICK,
    CONTROL_SET_THROTTLE,
    ControlInput,
    DroneSetup,
    FenceCheck,
    GeofenceConfig,
    VehicleState,
    wind_vector,
)

DT = 0.1
CRUISE_SPEED = 5.0
CLIMB_SPEED = 2.0
LAND_SPEED = 1.0
TRACK_TAU = 0.5
MOMENTUM_TAU = 8.0
GRAVITY = 9.81
POS_GAIN = 1.0

PREARM_DURATION = 2.0
ARM_DURATION = 1.0
CAPTURE_RADIUS = 0.75
ALT_CAPTURE = 0.3

FREEFALL_VZ = -4.0
FREEFALL_HOLD_S = 0.3
HARD_LANDING_VZ = 2.0
GROUND_DISARM_DELAY = 2.0

FLYAWAY_DISTANCE = 1000.0
SIM_TIME_CAP = 600.0
PREDICTION_HORIZON = 2.0

MANUAL_MODES = ("STABILIZED", "ALTCTL", "POSCTL")
AIRBORNE_EPS = 0.05

_TRACK_ALPHA = 1.0 - math.exp(-DT / TRACK_TAU)
_MOMENTUM_DECAY = math.exp(-DT / MOMENTUM_TAU)


def check_geofence(
    state: VehicleState, fence: GeofenceConfig, horizon: float = PREDICTION_HORIZON
) -> FenceCheck | None:
    """Evaluate the fence at one instant; None when nothing is violated.

    A breach is an actual position outside the boundary (or above the
    ceiling). With prediction on, a position that will exit the boundary
    within ``horizon`` seconds at the current velocity also trips the fence.
    The caller is responsible for edge-triggering and for applying the
    returned action at most once.
    """
    if fence.status != "On":
        return None
    outside = not fence.contains(state.x, state.y, state.z)
    if outside:
        return FenceCheck(breached=True, predicted=False, action=fence.action)
    if fence.prediction == "On":
        fx = state.x + state.vx * horizon
        fy = state.y + state.vy * horizon
        fz = state.z + state.vz * horizon
        if not fence.contains(fx, fy, max(fz, 0.0)):
            return FenceCheck(breached=False, predicted=True, action=fence.action)
    return None


class World:
    """One vehicle, one mission, one flight log."""

    def __init__(
        self,
        mission: Mission,
        setup: DroneSetup | None = None,
        wind: tuple[str, str] = ("NONE", "NORTH"),
        allowed_modes: tuple[str, ...] = vocab.MODES,
        meta: dict | None = None,
    ):
        self.mission = mission
        self.setup = setup or DroneSetup()
        self.wind = wind_vector(wind[0], wind[1])
        self.allowed_modes = allowed_modes
        self.state = VehicleState()
        self.log = FlightLog(
            meta={
                "mission": mission.name,
                "wind_speed": wind[0],
                "wind_direction": wind[1],
                "dt": DT,
                **(meta or {}),
            }
        )
        self.done = False
        self.done_reason = ""

        # Arming protocol: unless the neutral-throttle arming fix is enabled,
        # the stick sits fully down for arming and is repositioned to the
        # configured detent during takeoff.
        if self.setup.arm_neutral_throttle:
            self.state.throttle = vocab.throttle_level(self.setup.throttle_init)
        else:
            self.state.throttle = vocab.throttle_level("MaxLOW")

        self._phase_timer = 0.0
        self._wp_index = 0
        self._mission_landing = False
        self._all_waypoints_visited = False
        self._mission_complete = False
        self._throttle_protocol_done = self.setup.arm_neutral_throttle

        self._killed = False
        self._kill_at: float | None = None
        self._hold_point: tuple[float, float] | None = None
        self._hold_alt: float | None = None
        self._air_velocity = (0.0, 0.0)
        self._rtl_alt: float | None = None
        self._rtl_phase = ""
        self._breach_active = False
        self._predicted_active = False
        self._fence_action_fired = False
        self._freefall_time = 0.0
        self._freefall_logged = False
        self._ground_time = 0.0
        self._was_airborne = False

        self.log.add_sample(self._sample())

    # -- manual control -----------------------------------------------------

    def apply_manual_control(self, control: ControlInput, source: str | None = None) -> None:
        """Apply one input at the current tick boundary and log it."""
        detail: dict = {"control": control.kind}
        if control.kind == CONTROL_SET_MODE:
            mode = vocab.canonical_mode(control.mode or "")
            if mode not in self.allowed_modes:
                raise RejectedInput(f"mode {control.mode!r} not in the declared space")
            detail["value"] = mode
            self._enter_mode(mode)
        elif control.kind == CONTROL_SET_THROTTLE:
            position = vocab.canonical_throttle(control.throttle_position or "")
            detail["value"] = position
            self.state.throttle = vocab.throttle_level(position)
        elif control.kind == CONTROL_SET_STICK:
            pitch, roll = control.stick or (0.0, 0.0)
            detail["value"] = f"{pitch:.3f},{roll:.3f}"
            self.state.stick_pitch = pitch
            self.state.stick_roll = roll
        elif control.kind == CONTROL_KILL_MOTORS:
            detail["value"] = f"{self.setup.kill_grace_s:.1f}s"
            self._kill_at = self.state.time + self.setup.kill_grace_s
            if self.setup.kill_grace_s <= 0.0:
                self._engage_kill()
        if source:
            detail["source"] = source
        self.log.add_event(LogEvent(self.state.time, EVENT_MANUAL_CONTROL, detail))

    def _engage_kill(self) -> None:
        self._killed = True
        self.state.motors_on = False

    def _enter_mode(self, mode: str) -> None:
        state = self.state
        if mode == state.mode:
            return
        state.mode = mode
        if mode in ("POSCTL", "AUTO.LOITER"):
            self._hold_point = (state.x, state.y)
            self._hold_alt = state.z
            if mode == "AUTO.LOITER" and state.z > AIRBORNE_EPS:
                state.lifecycle = "Hover"
        elif mode in ("STABILIZED", "ALTCTL"):
            self._air_velocity = (state.vx - self.wind[0], state.vy - self.wind[1])
            self._hold_alt = state.z
        elif mode == "AUTO.RTL":
            self._rtl_alt = max(self.mission.rtl_altitude, state.z)
            self._rtl_phase = "climb"
            self._hold_point = (state.x, state.y)
            if state.z > AIRBORNE_EPS:
                state.lifecycle = "Fly"
        elif mode == "AUTO.LAND":
            self._hold_point = (state.x, state.y)
            if state.z > AIRBORNE_EPS:
                state.lifecycle = "Land"

    # -- one tick -------------------------------------------------------------

    def step(self) -> None:
        """Advance the world by one tick and append a sample."""
        if self.done:
            return
        state = self.state
        t_new = state.time + DT

        if self._kill_at is not None and not self._killed and t_new >= self._kill_at:
            self._engage_kill()

        events: list[LogEvent] = []

        if state.mode == "OFFBOARD":
            self._advance_autopilot(events, t_new)

        command = self._velocity_command()
        self._integrate(command, events, t_new)
        self._check_fence(events, t_new)
        self._detect_freefall(events, t_new)

        state.time = t_new
        self.log.add_sample(self._sample())
        for event in events:
            self.log.add_event(event)

        if not self.done and t_new >= SIM_TIME_CAP:
            self.log.add_event(LogEvent(t_new, EVENT_TIMEOUT, {"reason": "sim-time-cap"}))
            self.done = True
            self.done_reason = "timeout"
        if not self.done and state.horizontal_distance_from_home() > FLYAWAY_DISTANCE:
            self.log.add_event(LogEvent(t_new, EVENT_TIMEOUT, {"reason": "fly-away-cutoff"}))
            self.done = True
            self.done_reason = "fly-away"

    # -- autonomous pilot -------------------------------------------------------

    def _advance_autopilot(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        lifecycle = state.lifecycle
        if lifecycle == "Pre-arm":
            self._phase_timer += DT
            if self._phase_timer >= PREARM_DURATION and not self._killed:
                arming_ok = (
                    self.setup.arm_neutral_throttle or state.throttle <= -0.999
                )
                if arming_ok:
                    state.armed = True
                    state.motors_on = True
                    state.lifecycle = "Arm"
                    self._phase_timer = 0.0
                    events.append(LogEvent(t_new, EVENT_ARM, {}))
        elif lifecycle == "Arm":
            self._phase_timer += DT
            if self._phase_timer >= ARM_DURATION:
                state.lifecycle = "Takeoff"
                self._phase_timer = 0.0
        elif lifecycle == "Takeoff":
            if not self._throttle_protocol_done:
                # The pilot-in-command repositions the throttle from the
                # arming detent to its configured in-flight position.
                self._throttle_protocol_done = True
                position = self.setup.throttle_init
                self.state.throttle = vocab.throttle_level(position)
                events.append(
                    LogEvent(
                        t_new,
                        EVENT_MANUAL_CONTROL,
                        {"control": CONTROL_SET_THROTTLE, "value": position, "source": "arming-protocol"},
                    )
                )
            if state.z >= self.mission.takeoff_altitude - ALT_CAPTURE:
                state.lifecycle = "Fly"
                self._wp_index = 0
        elif lifecycle == "Fly":
            target = self._current_target()
            dx = target[0] - state.x
            dy = target[1] - state.y
            if math.hypot(dx, dy) <= CAPTURE_RADIUS:
                if self._wp_index < len(self.mission.waypoints):
                    state.lifecycle = "Hover"
                    self._phase_timer = 0.0
                    self._hold_point = (target[0], target[1])
                else:
                    state.lifecycle = "Land"
                    self._mission_landing = True
                    self._all_waypoints_visited = True
                    self._hold_point = (0.0, 0.0)
        elif lifecycle == "Hover":
            self._phase_timer += DT
            if self._phase_timer >= self.mission.hover_dwell_s:
                self._wp_index += 1
                state.lifecycle = "Fly"
                self._phase_timer = 0.0

    def _current_target(self) -> tuple[float, float, float]:
        if self._wp_index < len(self.mission.waypoints):
            return self.mission.waypoints[self._wp_index]
        return (0.0, 0.0, self.mission.takeoff_altitude)

    # -- velocity commands --------------------------------------------------------

    def _velocity_command(self) -> tuple[float, float, float]:
        state = self.state
        if not state.motors_on:
            return (0.0, 0.0, 0.0)
        mode = state.mode
        if mode == "OFFBOARD":
            return self._autopilot_command()
        if mode in ("STABILIZED", "ALTCTL"):
            vax, vay = self._air_velocity
            if abs(state.stick_pitch) > 1e-9 or abs(state.stick_roll) > 1e-9:
                vax = state.stick_roll * CRUISE_SPEED
                vay = state.stick_pitch * CRUISE_SPEED
            else:
                vax *= _MOMENTUM_DECAY
                vay *= _MOMENTUM_DECAY
            self._air_velocity = (vax, vay)
            cmd_z = state.throttle * CLIMB_SPEED
            return (self.wind[0] + vax, self.wind[1] + vay, cmd_z)
        if mode == "POSCTL":
            if abs(state.stick_pitch) > 1e-9 or abs(state.stick_roll) > 1e-9:
                cmd_x = state.stick_roll * CRUISE_SPEED
                cmd_y = state.stick_pitch * CRUISE_SPEED
                self._hold_point = None
            else:
                if self._hold_point is None:
                    self._hold_point = (state.x, state.y)
                cmd_x, cmd_y = self._hold_command(self._hold_point)
            return (cmd_x, cmd_y, state.throttle * CLIMB_SPEED)
        if mode == "AUTO.LOITER":
            cmd_x, cmd_y = self._hold_command(self._hold_point or (state.x, state.y))
            cmd_z = self._alt_command(self._hold_alt if self._hold_alt is not None else state.z)
            return (cmd_x, cmd_y, cmd_z)
        if mode == "AUTO.RTL":
            return self._rtl_command()
        if mode == "AUTO.LAND":
            cmd_x, cmd_y = self._hold_command(self._hold_point or (state.x, state.y))
            return (cmd_x, cmd_y, -LAND_SPEED)
        return (0.0, 0.0, 0.0)

    def _autopilot_command(self) -> tuple[float, float, float]:
        state = self.state
        lifecycle = state.lifecycle
        if lifecycle in ("Pre-arm", "Arm"):
            return (0.0, 0.0, 0.0)
        if lifecycle == "Takeoff":
            cmd_x, cmd_y = self._hold_command((0.0, 0.0))
            return (cmd_x, cmd_y, self._alt_command(self.mission.takeoff_altitude))
        if lifecycle == "Fly":
            target = self._current_target()
            dx = target[0] - state.x
            dy = target[1] - state.y
            dist = math.hypot(dx, dy)
            if dist > 1e-9:
                # Waypoints are flown through at cruise speed; hold points
                # (hover, landing) use the braking law instead.
                cmd_x = CRUISE_SPEED * dx / dist
                cmd_y = CRUISE_SPEED * dy / dist
            else:
                cmd_x = cmd_y = 0.0
            return (cmd_x, cmd_y, self._alt_command(target[2]))
        if lifecycle == "Hover":
            cmd_x, cmd_y = self._hold_command(self._hold_point or (state.x, state.y))
            target_alt = self._current_target()[2]
            return (cmd_x, cmd_y, self._alt_command(target_alt))
        if lifecycle == "Land":
            cmd_x, cmd_y = self._hold_command(self._hold_point or (0.0, 0.0))
            return (cmd_x, cmd_y, -LAND_SPEED)
        return (0.0, 0.0, 0.0)

    def _hold_command(self, point: tuple[float, float]) -> tuple[float, float]:
        dx = point[0] - self.state.x
        dy = point[1] - self.state.y
        dist = math.hypot(dx, dy)
        if dist < 1e-9:
            return (0.0, 0.0)
        speed = min(CRUISE_SPEED, POS_GAIN * dist)
        return (speed * dx / dist, speed * dy / dist)

    def _alt_command(self, target_alt: float) -> float:
        err = target_alt - self.state.z
        return max(-CLIMB_SPEED, min(CLIMB_SPEED, POS_GAIN * err))

    def _rtl_command(self) -> tuple[float, float, float]:
        state = self.state
        rtl_alt = self._rtl_alt if self._rtl_alt is not None else self.mission.rtl_altitude
        if self._rtl_phase == "climb":
            if state.z >= rtl_alt - ALT_CAPTURE:
                self._rtl_phase = "home"
            cmd_x, cmd_y = self._hold_command(self._hold_point or (state.x, state.y))
            return (cmd_x, cmd_y, self._alt_command(rtl_alt))
        if self._rtl_phase == "home":
            dx = -state.x
            dy = -state.y
            dist = math.hypot(dx, dy)
            if dist <= CAPTURE_RADIUS:
                self._rtl_phase = "descend"
                self._hold_point = (0.0, 0.0)
                state.lifecycle = "Land"
                return self._rtl_command()
            speed = min(CRUISE_SPEED, max(POS_GAIN * dist, 0.5))
            return (speed * dx / dist, speed * dy / dist, self._alt_command(rtl_alt))
        cmd_x, cmd_y = self._hold_command(self._hold_point or (0.0, 0.0))
        return (cmd_x, cmd_y, -LAND_SPEED)

    # -- integration and events -----------------------------------------------------

    def _integrate(self, command: tuple[float, float, float], events: list[LogEvent], t_new: float) -> None:
        state = self.state
        if state.motors_on:
            state.vx += (command[0] - state.vx) * _TRACK_ALPHA
            state.vy += (command[1] - state.vy) * _TRACK_ALPHA
            state.vz += (command[2] - state.vz) * _TRACK_ALPHA
        else:
            if state.z > 0.0:
                state.vz -= GRAVITY * DT
            else:
                state.vx = state.vy = state.vz = 0.0

        state.x += state.vx * DT
        state.y += state.vy * DT
        new_z = state.z + state.vz * DT

        if state.z > AIRBORNE_EPS:
            self._was_airborne = True

        if new_z <= 0.0 and self._was_airborne and state.z > 0.0:
            self._touchdown(events, t_new)
            state.z = 0.0
        elif new_z <= 0.0:
            state.z = 0.0
            if state.vz < 0.0:
                state.vz = 0.0
        else:
            state.z = new_z

        self._ground_behavior(events, t_new)

    def _touchdown(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        impact_vz = state.vz
        events.append(LogEvent(t_new, EVENT_TOUCHDOWN, {"vz": f"{impact_vz:.3f}"}))
        if abs(impact_vz) > HARD_LANDING_VZ:
            events.append(LogEvent(t_new, EVENT_HARD_LANDING, {"vz": f"{impact_vz:.3f}"}))
        state.vx = state.vy = state.vz = 0.0
        state.lifecycle = "Land"
        self._was_airborne = False
        self._ground_time = 0.0

        mission_complete = self._mission_landing and self._all_waypoints_visited
        if mission_complete:
            self._mission_complete = True
            events.append(LogEvent(t_new, EVENT_MISSION_COMPLETE, {}))
        else:
            events.append(LogEvent(t_new, EVENT_EARLY_LANDING, {}))

        if not state.motors_on or mission_complete or state.mode in ("AUTO.LAND", "AUTO.RTL"):
            self._disarm(events, t_new)

    def _ground_behavior(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        if self.done or state.z > 0.0 or not state.armed:
            return
        if not state.motors_on:
            self._disarm(events, t_new)
            return
        # Landed under power: the land detector disarms after a short
        # confirmation window. In a manual mode a high throttle lifts off
        # again instead of disarming.
        if state.lifecycle == "Land":
            if state.mode in MANUAL_MODES and state.throttle > 0.0:
                self._ground_time = 0.0
                return
            self._ground_time += DT
            if self._ground_time >= GROUND_DISARM_DELAY:
                self._disarm(events, t_new)

    def _disarm(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        if state.armed:
            state.armed = False
        state.motors_on = False
        events.append(LogEvent(t_new, EVENT_DISARM, {}))
        self.done = True
        self.done_reason = "disarmed"

    def _check_fence(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        fence = self.setup.geofence
        if fence.status != "On" or not state.armed:
            return
        check = check_geofence(state, fence)
        if check is None:
            self._breach_active = False
            self._predicted_active = False
            return
        fire = False
        if check.breached and not self._breach_active:
            self._breach_active = True
            events.append(LogEvent(t_new, EVENT_BREACH, {"kind": "actual", "action": check.action}))
            fire = True
        elif check.predicted and not self._predicted_active:
            self._predicted_active = True
            events.append(LogEvent(t_new, EVENT_BREACH, {"kind": "predicted", "action": check.action}))
            fire = True
        if not fire or check.action == "None" or self._fence_action_fired:
            return
        self._fence_action_fired = True
        events.append(LogEvent(t_new, EVENT_FAILSAFE, {"action": check.action}))
        if check.action == "Hold":
            self._enter_mode("AUTO.LOITER")
        elif check.action == "Return":
            self._enter_mode("AUTO.RTL")
        elif check.action == "Land":
            self._enter_mode("AUTO.LAND")
        elif check.action == "Terminate":
            self._engage_kill()

    def _detect_freefall(self, events: list[LogEvent], t_new: float) -> None:
        state = self.state
        if not state.motors_on and state.vz < FREEFALL_VZ and state.z > 0.0:
            self._freefall_time += DT
            if self._freefall_time >= FREEFALL_HOLD_S and not self._freefall_logged:
                self._freefall_logged = True
                events.append(LogEvent(t_new, EVENT_FREEFALL, {"vz": f"{state.vz:.3f}"}))
        else:
            self._freefall_time = 0.0

    def _sample(self) -> Sample:
        state = self.state
        return Sample(
            time=state.time,
            x=state.x,
            y=state.y,
            z=state.z,
            vx=state.vx,
            vy=state.vy,
            vz=state.vz,
            mode=state.mode,
            lifecycle=state.lifecycle,
            armed=state.armed,
            motors_on=state.motors_on,
        )

    @property
    def mission_complete(self) -> bool:
        return self._mission_complete

    @property
    def fence_breached(self) -> bool:
        return self._breach_active or self._predicted_active


def run_mission(
    mission: Mission,
    setup: DroneSetup | None = None,
    wind: tuple[str, str] = ("NONE", "NORTH"),
    controls: list[ControlInput] | None = None,
    tick_hook=None,
    allowed_modes: tuple[str, ...] = vocab.MODES,
    meta: dict | None = None,
    max_time: float = SIM_TIME_CAP,
) -> FlightLog:
    """Run one mission in a fresh world and return its flight log.

    ``controls`` is an optional scripted schedule; each input is applied at
    the first tick boundary at or after its ``issue_time``. ``tick_hook``,
    when given, is called as ``tick_hook(world)`` after every tick; the
    runner uses it for precondition scanning and agent dispatch.
    """
    world = World(mission, setup=setup, wind=wind, allowed_modes=allowed_modes, meta=meta)
    pending = sorted(controls or [], key=lambda c: c.issue_time)
    idx = 0
    while not world.done and world.state.time < max_time:
        while idx < len(pending) and pending[idx].issue_time <= world.state.time:
            world.apply_manual_control(pending[idx], source="schedule")
            idx += 1
        world.step()
        if tick_hook is not None:
            tick_hook(world)
    return world.log
