"""Runner: precondition gating, dispatch bookkeeping, corpus execution."""

from __future__ import annotations

import itertools
import json

import pytest

from dronefuzz.data import builtin_text
from dronefuzz.model import TestOutcomeKind, parse_test, validate_test
from dronefuzz.runner import (
    ProxyHumanAgent,
    STATUS_NEVER_MET,
    STATUS_PERFORMED,
    execute_test,
    precondition_met,
    run_corpus,
    task_to_control,
)
from dronefuzz.runner.corpus_run import blueprint_log
from dronefuzz.runner.profile import read_profile, write_profile
from dronefuzz.model.types import Wind
from dronefuzz.model import HIT, FuzzTest, RoleScript, Task
from dronefuzz.simulator import VehicleState


def single_hit_test(mode, state, task=None, test_id="probe", config=None, wind=None):
    hit = HIT(
        hit_id="1",
        drones=("BLUE",),
        task=task or Task("CHANGE-MODE", "STABILIZED"),
        precondition_mode=mode,
        precondition_state=state,
    )
    return FuzzTest(
        test_id=test_id,
        mission="BASIC-WAYPOINTS",
        wind=wind or Wind(),
        drone_config={"BLUE": dict(config or {})},
        roles=(RoleScript("RPIC", "RC TRANSMITTER", (hit,)),),
    )


class TestPreconditionMet:
    def test_exact_match(self):
        hit = single_hit_test("OFFBOARD", "Fly").roles[0].hits[0]
        assert precondition_met(hit, VehicleState(mode="OFFBOARD", lifecycle="Fly"))

    def test_state_mismatch(self):
        hit = single_hit_test("OFFBOARD", "Takeoff").roles[0].hits[0]
        assert not precondition_met(hit, VehicleState(mode="OFFBOARD", lifecycle="Fly"))

    def test_truth_table_over_all_pairs(self, space):
        # Table-driven check over every 7 x 6 (mode, state) pairing.
        for pre_mode, pre_state in itertools.product(space.modes, space.states):
            hit = single_hit_test(pre_mode, pre_state).roles[0].hits[0]
            for cur_mode, cur_state in itertools.product(space.modes, space.states):
                state = VehicleState(mode=cur_mode, lifecycle=cur_state)
                expected = (pre_mode, pre_state) == (cur_mode, cur_state)
                assert precondition_met(hit, state) is expected

    def test_config_params_must_match(self):
        test = single_hit_test("OFFBOARD", "Fly")
        hit = test.roles[0].hits[0]
        gated = HIT(
            hit_id=hit.hit_id,
            drones=hit.drones,
            task=hit.task,
            precondition_mode=hit.precondition_mode,
            precondition_state=hit.precondition_state,
            precondition_params={"Geofence_Stat": "On"},
        )
        state = VehicleState(mode="OFFBOARD", lifecycle="Fly")
        assert not precondition_met(gated, state, {"Geofence_Stat": "Off"})
        assert precondition_met(gated, state, {"Geofence_Stat": "On"})


class TestExecuteTest:
    def test_zero_hit_equals_blueprint(self, space):
        test = FuzzTest(
            test_id="nohits",
            mission="BASIC-WAYPOINTS",
            wind=Wind(),
            drone_config={"BLUE": {}},
            roles=(RoleScript("RPIC", "RC TRANSMITTER", ()),),
        )
        execution = execute_test(test, space=space)
        blueprint = blueprint_log(space, "BASIC-WAYPOINTS", Wind())
        assert execution.outcome is None  # valid; labeling happens downstream
        assert [r for r in execution.log.records] == [r for r in blueprint.records]

    def test_geofence_off_stabilized_shape(self, space):
        # Fence on with no action + mode switch at Fly with a high-ish
        # throttle: breach logged, task performed, mission incomplete.
        test = single_hit_test(
            "OFFBOARD",
            "Fly",
            config={
                "Geofence_Stat": "On",
                "Geofence_Pred": "Off",
                "Geofence_Act": "None",
                "Throttle_Init": "JustAbove",
            },
        )
        execution = execute_test(test, space=space)
        assert execution.hit_statuses[0].status == STATUS_PERFORMED
        assert execution.log.has_event("Breach")
        assert not execution.log.has_event("MissionComplete")

    def test_unreachable_precondition_is_invalid(self, space):
        test = single_hit_test("STABILIZED", "Pre-arm")
        execution = execute_test(test, space=space)
        assert execution.hit_statuses[0].status == STATUS_NEVER_MET
        assert execution.outcome is TestOutcomeKind.INVALID_UNTESTED
        report = validate_test(test, space)
        assert not report.hit_checks[0].reachable

    def test_delay_shifts_dispatch(self, space):
        test = single_hit_test("OFFBOARD", "Hover")
        delayed = parse_test(
            json.loads(
                '{"Test_ID": "d", "Mission": "BASIC-WAYPOINTS", "Roles": [{"Role": "RPIC",'
                ' "HITS": [{"ID": "1", "Drones": ["BLUE"], "Task": "SET MODE TO STABILIZED",'
                ' "Mode": "OFFBOARD", "State": "Hover", "Delay": 2.0}],'
                ' "Interaction_Device": "RC TRANSMITTER"}]}'
            )
        )
        fast = execute_test(test, space=space)
        slow = execute_test(delayed, space=space)
        fast_status = fast.hit_statuses[0]
        slow_status = slow.hit_statuses[0]
        assert fast_status.precondition_met_time == pytest.approx(
            slow_status.precondition_met_time
        )
        assert slow_status.dispatched_time - slow_status.precondition_met_time == pytest.approx(
            2.0, abs=0.11
        )
        assert fast_status.dispatched_time == fast_status.precondition_met_time

    def test_local_order_enforced(self, space):
        test = parse_test(builtin_text("test_two_roles"))
        execution = execute_test(test, space=space)
        rpic = [s for s in execution.hit_statuses if s.role == "RPIC"]
        assert rpic[0].performed_time < rpic[1].performed_time
        mc = [s for s in execution.hit_statuses if s.role == "MC"]
        assert mc[0].performed_time >= rpic[1].performed_time

    def test_stale_precondition_flagged_for_slow_operator(self, space):
        class SlowAgent(ProxyHumanAgent):
            def on_dispatch(self, world, role, hit):
                # Acts 8 seconds after the prompt; the gating state will
                # have moved on (Takeoff -> Fly) by then.
                due = world.state.time + 8.0
                self._outbox.append((due, role, task_to_control(hit.task, issue_time=due)))

        test = single_hit_test("OFFBOARD", "Takeoff", task=Task("MOVE-THROTTLE", "MedHIGH"))
        execution = execute_test(test, agent=SlowAgent(), space=space)
        status = execution.hit_statuses[0]
        assert status.status == STATUS_PERFORMED
        assert status.stale_precondition
        assert execution.outcome is None  # retained, not invalidated

    def test_proxy_reaction_latency(self, space):
        test = single_hit_test("OFFBOARD", "Hover")
        instant = execute_test(test, agent=ProxyHumanAgent(), space=space)
        delayed = execute_test(test, agent=ProxyHumanAgent(reaction_latency_s=1.0), space=space)
        dt = (
            delayed.hit_statuses[0].performed_time
            - instant.hit_statuses[0].performed_time
        )
        assert dt == pytest.approx(1.0, abs=0.11)


class TestRunCorpus:
    def test_single_blueprint_test_profile(self, space):
        test = FuzzTest(
            test_id="solo",
            mission="BASIC-WAYPOINTS",
            wind=Wind(),
            drone_config={"BLUE": {}},
            roles=(RoleScript("RPIC", "RC TRANSMITTER", ()),),
        )
        rows = run_corpus([test], space)
        assert len(rows) == 1
        assert rows[0].outcome == TestOutcomeKind.VALID_NOMINAL.value
        assert rows[0].mission_complete

    def test_rows_follow_corpus_order(self, space, subgrid_corpus):
        corpus = subgrid_corpus[200:212]
        rows = run_corpus(corpus, space, parallelism=3)
        assert [r.test_id for r in rows] == [t.test_id for t in corpus]

    def test_profile_round_trip(self, tmp_path, space, subgrid_corpus):
        rows = run_corpus(subgrid_corpus[:6], space)
        first = tmp_path / "profile.csv"
        second = tmp_path / "profile2.csv"
        write_profile(first, rows)
        # Float formatting quantizes on the first write; a read-write cycle
        # must then be byte-stable.
        write_profile(second, read_profile(first))
        assert first.read_bytes() == second.read_bytes()
        reread = read_profile(first)
        assert [r.test_id for r in reread] == [r.test_id for r in rows]
        assert [r.outcome for r in reread] == [r.outcome for r in rows]

    def test_logs_written(self, tmp_path, space, subgrid_corpus):
        run_corpus(subgrid_corpus[:3], space, logs_dir=tmp_path)
        for test in subgrid_corpus[:3]:
            assert (tmp_path / f"{test.test_id}.log").exists()
        assert (tmp_path / "blueprint_BASIC-WAYPOINTS_NONE.log").exists()

    def test_empty_corpus_rejected(self, space):
        with pytest.raises(ValueError):
            run_corpus([], space)
