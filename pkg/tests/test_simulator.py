"""Simulator: kinematics, mode semantics, geofence, kill switch, determinism."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dronefuzz.errors import RejectedInput
from dronefuzz.model import vocab
from dronefuzz.simulator import (
    ControlInput,
    DroneSetup,
    FlightLog,
    GeofenceConfig,
    Mission,
    VehicleState,
    World,
    check_geofence,
    run_mission,
)
from dronefuzz.simulator.types import (
    CONTROL_KILL_MOTORS,
    CONTROL_SET_MODE,
    CONTROL_SET_STICK,
    CONTROL_SET_THROTTLE,
)
from dronefuzz.simulator.world import CRUISE_SPEED, DT, GRAVITY, PREDICTION_HORIZON

MISSION = Mission("BASIC-WAYPOINTS", 12.5, ((0.0, 30.0, 12.5), (0.0, 60.0, 12.5)), 5.0, 30.0)


def set_mode(mode, t=0.0):
    return ControlInput(CONTROL_SET_MODE, mode=mode, issue_time=t)


def kill(t=0.0):
    return ControlInput(CONTROL_KILL_MOTORS, issue_time=t)


def first_fly_time(log: FlightLog) -> float:
    for sample in log.samples:
        if sample.lifecycle == "Fly":
            return sample.time
    raise AssertionError("never reached Fly")


class TestNominalFlight:
    def test_blueprint_completes_lands_disarms(self):
        log = run_mission(MISSION, DroneSetup())
        assert log.has_event("MissionComplete")
        assert log.has_event("Disarm")
        final = log.samples[-1]
        assert final.z == 0.0
        assert not final.armed
        assert abs(max(s.z for s in log.samples) - 12.5) <= 0.5

    def test_no_hard_landing_or_freefall(self):
        log = run_mission(MISSION, DroneSetup())
        assert not log.has_event("HardLanding")
        assert not log.has_event("Freefall")

    def test_lifecycle_order(self):
        log = run_mission(MISSION, DroneSetup())
        seen = []
        for sample in log.samples:
            if not seen or seen[-1] != sample.lifecycle:
                seen.append(sample.lifecycle)
        assert seen == [
            "Pre-arm",
            "Arm",
            "Takeoff",
            "Fly",
            "Hover",
            "Fly",
            "Hover",
            "Fly",
            "Land",
        ]

    def test_determinism_bit_identical(self):
        a = run_mission(MISSION, DroneSetup(), wind=("MEDIUM", "NORTH"))
        b = run_mission(MISSION, DroneSetup(), wind=("MEDIUM", "NORTH"))
        assert a.to_text() == b.to_text()

    def test_log_text_round_trip(self):
        log = run_mission(MISSION, DroneSetup())
        parsed = FlightLog.from_text(log.to_text())
        assert parsed.to_text() == log.to_text()
        assert len(parsed.samples) == len(log.samples)


class TestKinematics:
    def test_ballistic_fall_velocity(self):
        # Motors cut at altitude: after 1 s of ticks vz integrates to -g.
        world = World(MISSION, DroneSetup())
        world.state.z = 10.0
        world.state.armed = True
        world.state.motors_on = True
        world.state.lifecycle = "Hover"
        world.apply_manual_control(kill())
        for _ in range(10):
            world.step()
        assert world.state.vz == pytest.approx(-GRAVITY, abs=1e-9)

    def test_waypoint_5m_reached_within_1_2s(self):
        # At cruise speed toward a waypoint 5 m away: pass-through capture
        # within 1.2 s (4.25 m to the capture radius at 5 m/s, plus margin).
        world = World(MISSION, DroneSetup())
        state = world.state
        state.armed = True
        state.motors_on = True
        state.lifecycle = "Fly"
        state.z = 12.5
        state.x, state.y = 0.0, 25.0
        state.vy = CRUISE_SPEED
        world._wp_index = 0  # waypoint at (0, 30)
        elapsed = 0.0
        while world.state.lifecycle == "Fly" and elapsed < 3.0:
            world.step()
            elapsed += DT
        assert world.state.lifecycle == "Hover"
        assert elapsed <= 1.2

    def test_stabilized_just_above_neutral_climbs(self):
        # Mirrors the motivating mishap: a barely-above-neutral throttle in
        # the manual mode produces a slow steady climb.
        setup = DroneSetup(throttle_init="JustAbove")
        log = run_mission(
            MISSION, setup, controls=[set_mode("STABILIZED", t=10.0)], max_time=60.0
        )
        zs = {round(s.time, 1): s.z for s in log.samples}
        climb_rate = (zs[50.0] - zs[30.0]) / 20.0
        assert climb_rate == pytest.approx(0.1 * 2.0, rel=0.05)

    def test_posctl_holds_position_in_wind(self):
        log = run_mission(
            MISSION,
            DroneSetup(),
            wind=("HIGH", "NORTH"),
            controls=[set_mode("POSCTL", t=20.0)],
            max_time=80.0,
        )
        hold = [s for s in log.samples if s.time >= 30.0]
        ys = [s.y for s in hold]
        assert max(ys) - min(ys) < 0.5

    def test_stabilized_drifts_south_in_north_wind(self):
        log = run_mission(
            MISSION,
            DroneSetup(),
            wind=("MEDIUM", "NORTH"),
            controls=[set_mode("STABILIZED", t=20.0)],
            max_time=120.0,
        )
        drift = [s for s in log.samples if s.time >= 30.0]
        ys = [s.y for s in drift]
        # Monotone southward drift while the manual mode is active.
        assert all(b <= a + 1e-9 for a, b in zip(ys, ys[1:]))
        assert ys[-1] < ys[0] - 50.0


class TestManualControls:
    def test_rtl_climbs_to_return_altitude(self):
        log = run_mission(MISSION, DroneSetup(), controls=[set_mode("AUTO.RTL", t=16.0)])
        assert max(s.z for s in log.samples) == pytest.approx(30.0, abs=0.5)
        final = log.samples[-1]
        assert final.z == 0.0
        assert math.hypot(final.x, final.y) < 1.0

    def test_kill_on_ground_is_inert(self):
        log = run_mission(MISSION, DroneSetup(), controls=[kill(t=0.5)], max_time=30.0)
        assert not log.has_event("Freefall")
        assert max(s.z for s in log.samples) == 0.0
        assert not any(s.motors_on for s in log.samples)

    def test_kill_while_airborne_freefalls(self):
        log = run_mission(MISSION, DroneSetup(), controls=[kill(t=16.0)])
        assert log.has_event("Freefall")
        assert log.has_event("HardLanding")
        assert not log.has_event("MissionComplete")

    def test_kill_grace_delay(self):
        setup = DroneSetup(kill_grace_s=2.0)
        log = run_mission(MISSION, setup, controls=[kill(t=16.0)])
        motors_off_at = next(s.time for s in log.samples if s.armed and not s.motors_on)
        assert motors_off_at == pytest.approx(18.0, abs=0.15)

    def test_unknown_mode_rejected(self):
        world = World(MISSION, DroneSetup())
        with pytest.raises(RejectedInput):
            world.apply_manual_control(set_mode("CRUISE"))

    def test_posctl_throttle_down_descends_to_early_landing(self):
        setup = DroneSetup(throttle_init="MaxLOW")
        log = run_mission(MISSION, setup, controls=[set_mode("POSCTL", t=12.0)], max_time=60.0)
        assert log.has_event("Touchdown")
        assert log.has_event("EarlyLanding")
        assert log.has_event("Disarm")
        assert not log.has_event("MissionComplete")
        # Descent runs at the full manual vertical rate before touchdown.
        vzs = [s.vz for s in log.samples if 14.0 <= s.time <= 16.0]
        assert min(vzs) == pytest.approx(-2.0, abs=0.1)

    def test_stick_deflection_moves_vehicle_in_stabilized(self):
        controls = [
            set_mode("STABILIZED", t=10.0),
            ControlInput(CONTROL_SET_STICK, stick=(0.0, 1.0), issue_time=11.0),
        ]
        log = run_mission(MISSION, DroneSetup(), controls=controls, max_time=40.0)
        xs = [s.x for s in log.samples if s.time >= 12.0]
        assert xs[-1] - xs[0] > 50.0

    def test_throttle_move_updates_level(self):
        world = World(MISSION, DroneSetup())
        world.apply_manual_control(
            ControlInput(CONTROL_SET_THROTTLE, throttle_position="MedHIGH")
        )
        assert world.state.throttle == vocab.throttle_level("MedHIGH")


class TestArmingProtocol:
    def test_non_low_throttle_blocks_arming_by_default(self):
        # An early throttle move away from the arming detent leaves the
        # vehicle unable to arm: the mission stalls until the time cap.
        controls = [ControlInput(CONTROL_SET_THROTTLE, throttle_position="Neutral", issue_time=0.5)]
        log = run_mission(MISSION, DroneSetup(), controls=controls, max_time=30.0)
        assert not any(s.armed for s in log.samples)

    def test_default_protocol_repositions_stick_during_takeoff(self):
        log = run_mission(MISSION, DroneSetup(throttle_init="JustAbove"))
        protocol_moves = [
            e
            for e in log.events_of("ManualControl")
            if e.detail.get("source") == "arming-protocol"
        ]
        assert len(protocol_moves) == 1
        assert protocol_moves[0].detail["value"] == "JustAbove"
        assert log.has_event("MissionComplete")

    def test_neutral_arming_mitigation_allows_arming(self):
        # The implemented fix: with the flag on, the vehicle arms with the
        # stick wherever it was configured and no repositioning happens.
        setup = DroneSetup(throttle_init="Neutral", arm_neutral_throttle=True)
        log = run_mission(MISSION, setup)
        assert log.has_event("MissionComplete")
        assert not any(
            e.detail.get("source") == "arming-protocol"
            for e in log.events_of("ManualControl")
        )


def _exit_time_square(x, y, vx, vy, half_width):
    """Analytic first-exit time of a ray from inside an axis-aligned square."""
    times = []
    for pos, vel in ((x, vx), (y, vy)):
        if vel > 0:
            times.append((half_width - pos) / vel)
        elif vel < 0:
            times.append((-half_width - pos) / vel)
    return min(times) if times else math.inf


class TestGeofence:
    def test_fence_off_never_fires(self):
        state = VehicleState(x=500.0, y=500.0, z=100.0)
        assert check_geofence(state, GeofenceConfig.square("Off", "Off", "None")) is None

    def test_action_none_logs_breach_and_flight_continues(self):
        setup = DroneSetup(geofence=GeofenceConfig.square("On", "Off", "None"))
        log = run_mission(MISSION, setup)
        assert log.has_event("Breach")
        assert not log.has_event("FailsafeAction")
        # The mission keeps flying to the far waypoint and completes.
        assert log.has_event("MissionComplete")
        assert max(s.y for s in log.samples) > 55.0

    @pytest.mark.parametrize(
        "action,expect",
        [("Hold", "AUTO.LOITER"), ("Return", "AUTO.RTL"), ("Land", "AUTO.LAND")],
    )
    def test_actions_switch_modes(self, action, expect):
        setup = DroneSetup(geofence=GeofenceConfig.square("On", "Off", action))
        log = run_mission(MISSION, setup, max_time=650.0)
        assert log.has_event("FailsafeAction")
        assert expect in {s.mode for s in log.samples}

    def test_terminate_cuts_motors(self):
        setup = DroneSetup(geofence=GeofenceConfig.square("On", "Off", "Terminate"))
        log = run_mission(MISSION, setup)
        assert log.has_event("FailsafeAction")
        assert log.has_event("Freefall")

    def test_post_breach_distance_bounded(self):
        # After the action fires the overshoot past the boundary is bounded by
        # the braking behavior of the commanded mode.
        for action in ("Hold", "Return", "Land"):
            setup = DroneSetup(geofence=GeofenceConfig.square("On", "Off", action))
            log = run_mission(MISSION, setup, max_time=650.0)
            max_outside = max(s.y - 40.0 for s in log.samples)
            assert 0.0 < max_outside < 10.0, action

    def test_prediction_fires_before_crossing(self):
        # Oracle: analytic ray-square exit time. The predictive check must
        # fire while the exit is within the horizon but before the actual
        # crossing happens.
        fence = GeofenceConfig.square("On", "On", "Return")
        state = VehicleState(x=0.0, y=31.0, z=12.5, vx=0.0, vy=5.0)
        t_exit = _exit_time_square(state.x, state.y, state.vx, state.vy, 40.0)
        assert t_exit == pytest.approx(1.8)
        assert t_exit < PREDICTION_HORIZON
        check = check_geofence(state, fence, horizon=PREDICTION_HORIZON)
        assert check is not None and check.predicted

        # The boundary itself counts as inside: an exit time exactly at the
        # horizon projects onto the fence line and does not fire.
        state_edge = VehicleState(x=0.0, y=30.0, z=12.5, vx=0.0, vy=5.0)
        assert _exit_time_square(0.0, 30.0, 0.0, 5.0, 40.0) == pytest.approx(2.0)
        assert check_geofence(state_edge, fence, horizon=PREDICTION_HORIZON) is None

        # Far from the boundary the same velocity does not trip the check.
        state_far = VehicleState(x=0.0, y=0.0, z=12.5, vx=0.0, vy=5.0)
        assert _exit_time_square(0.0, 0.0, 0.0, 5.0, 40.0) > PREDICTION_HORIZON
        assert check_geofence(state_far, fence, horizon=PREDICTION_HORIZON) is None

    def test_prediction_in_flight_acts_inside_fence(self):
        setup = DroneSetup(geofence=GeofenceConfig.square("On", "On", "Return"))
        log = run_mission(MISSION, setup, max_time=650.0)
        fired = next(e for e in log.events if e.kind == "FailsafeAction")
        position_at = next(s for s in log.samples if s.time == fired.time)
        assert position_at.y < 40.0  # acted before the crossing
        assert log.has_event("Breach")

    def test_altitude_ceiling_breach(self):
        fence = GeofenceConfig.square("On", "Off", "None", max_altitude=50.0)
        state = VehicleState(x=0.0, y=0.0, z=51.0)
        check = check_geofence(state, fence)
        assert check is not None and check.breached


class TestInvariantProperties:
    @settings(max_examples=40, deadline=None)
    @given(
        z0=st.floats(min_value=1.0, max_value=80.0),
        vz0=st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_motors_off_vz_nonincreasing_until_ground(self, z0, vz0):
        world = World(MISSION, DroneSetup())
        state = world.state
        state.z = z0
        state.vz = vz0
        state.armed = True
        state.motors_on = True
        state.lifecycle = "Hover"
        world.apply_manual_control(kill())
        last_vz = state.vz
        while state.z > 0.0 and not world.done:
            world.step()
            if state.z > 0.0:
                assert state.vz <= last_vz + 1e-12
                last_vz = state.vz
        assert state.z >= 0.0

    def test_mode_closure_over_corpus(self, space, subgrid_corpus):
        from dronefuzz.runner import execute_test

        for test in subgrid_corpus[::101]:
            execution = execute_test(test, space=space)
            for sample in execution.log.samples:
                assert sample.mode in space.modes
                assert sample.lifecycle in space.states

    def test_reset_isolation_back_to_back(self):
        controls = [set_mode("STABILIZED", t=15.0)]
        solo = run_mission(MISSION, DroneSetup(throttle_init="JustAbove"), controls=controls, max_time=90.0)
        run_mission(MISSION, DroneSetup(), controls=[kill(t=10.0)])  # interleaved other test
        again = run_mission(MISSION, DroneSetup(throttle_init="JustAbove"), controls=controls, max_time=90.0)
        assert solo.to_text() == again.to_text()
