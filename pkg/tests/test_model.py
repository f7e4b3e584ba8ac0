"""Model layer: document parsing, invariants, and static validation."""

from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dronefuzz.data import builtin_text
from dronefuzz.errors import ConsistencyError, ConstraintError, SchemaError
from dronefuzz.model import (
    Task,
    Wind,
    legal_geofence_combos,
    parse_fuzz_space,
    parse_task_phrase,
    parse_test,
    serialize_test,
    validate_test,
    vocab,
)
from dronefuzz.model.documents import document_from_test

# The exact external document shape the runner consumes: the original
# two-role example with its historical spellings and wind value.
EXTERNAL_SHAPE_DOC = """
{
  "Mission": "BASIC-WAYPOINTS",
  "Environment": {
    "Wind": {
      "SPEED": "20KTS",
      "DIRECTION": "NORTH"
    }
  },
  "Roles": [
    {
      "Role": "RPIC",
      "HITS": [
        {
          "ID": "1",
          "Drones": ["GREEN"],
          "Task": "MOVE THROTTLE TO +1",
          "Mode": "OFFBOARD",
          "State": "TAKING-OFF"
        },
        {
          "ID": "2",
          "Drones": ["GREEN"],
          "Task": "SET MODE TO STABILIZED",
          "Mode": "OFFBOARD",
          "State": "FLYING"
        }
      ],
      "Interaction_Device": "RC TRANSMITTER"
    },
    {
      "Role": "MC",
      "HITS": [
        {
          "ID": "1",
          "Drones": ["GREEN"],
          "Task": "PRESS RTL BUTTON",
          "Mode": "STABILIZED",
          "State": "FLYING"
        }
      ],
      "Interaction_Device": "GUI"
    }
  ]
}
"""


class TestSpaceParsing:
    def test_default_space_counts(self, space):
        assert len(space.modes) == 7
        assert len(space.states) == 6
        assert len(space.throttle_positions) == 7
        assert len(space.tasks) == 3
        assert len(space.drones) == 3
        assert len(space.roles) == 3

    def test_empty_modes_rejected(self):
        doc = json.loads(builtin_text("space_default"))
        doc["Modes"] = []
        with pytest.raises(ConsistencyError):
            parse_fuzz_space(doc)

    def test_unknown_template_state_rejected(self):
        doc = json.loads(builtin_text("space_default"))
        doc["Tasks"]["CHANGE-MODE"]["States"] = ["CRUISE"]
        with pytest.raises(ConsistencyError):
            parse_fuzz_space(doc)

    def test_unknown_top_level_field_rejected(self):
        doc = json.loads(builtin_text("space_default"))
        doc["Phase"] = "L1"
        with pytest.raises(SchemaError):
            parse_fuzz_space(doc)

    def test_duplicate_identifiers_rejected(self):
        doc = json.loads(builtin_text("space_default"))
        doc["Modes"] = doc["Modes"] + [doc["Modes"][0]]
        with pytest.raises(ConsistencyError):
            parse_fuzz_space(doc)

    def test_empty_argument_list_rejected(self):
        doc = json.loads(builtin_text("space_default"))
        doc["Tasks"]["CHANGE-MODE"]["Arguments"] = []
        with pytest.raises(ConsistencyError):
            parse_fuzz_space(doc)


class TestGeofenceLegality:
    def test_exactly_13_legal_combinations(self):
        combos = legal_geofence_combos()
        assert len(combos) == 13

    def test_against_exhaustive_oracle(self):
        # Independent re-derivation: walk all 2 x 2 x 6 raw combinations and
        # apply the two implications directly.
        legal = []
        for stat, pred, act in itertools.product(
            ("Off", "On"), ("Off", "On"), vocab.GEOFENCE_ACTIONS
        ):
            if pred == "On" and stat != "On":
                continue
            if act != "None" and stat != "On":
                continue
            legal.append((stat, pred, act))
        assert len(legal) == 13
        assert sorted(legal) == sorted(legal_geofence_combos())

    def test_off_contributes_exactly_one(self):
        combos = [c for c in legal_geofence_combos() if c[0] == "Off"]
        assert combos == [("Off", "Off", "None")]


class TestTestParsing:
    def test_external_shape_document_parses(self):
        test = parse_test(EXTERNAL_SHAPE_DOC)
        assert test.mission == "BASIC-WAYPOINTS"
        assert test.wind == Wind("20KTS", "NORTH")
        assert [script.role for script in test.roles] == ["RPIC", "MC"]
        rpic, mc = test.roles
        assert len(rpic.hits) == 2
        assert rpic.interaction_device == "RC TRANSMITTER"
        assert rpic.hits[0].task == Task("MOVE-THROTTLE", "MaxHIGH")
        assert rpic.hits[0].precondition_state == "Takeoff"
        assert rpic.hits[1].task == Task("CHANGE-MODE", "STABILIZED")
        assert rpic.hits[1].precondition_state == "Fly"
        assert len(mc.hits) == 1
        assert mc.hits[0].task == Task("PRESS-RTL")
        assert mc.interaction_device == "GUI"

    def test_zero_hit_roles_are_valid(self):
        doc = json.loads(EXTERNAL_SHAPE_DOC)
        for role in doc["Roles"]:
            role["HITS"] = []
        test = parse_test(doc)
        assert all(len(script.hits) == 0 for script in test.roles)

    def test_geofence_implication_enforced(self):
        doc = json.loads(builtin_text("test_two_roles"))
        doc["Drone_Config"]["BLUE"]["Geofence_Act"] = "Land"
        doc["Drone_Config"]["BLUE"]["Geofence_Stat"] = "Off"
        with pytest.raises(ConstraintError):
            parse_test(doc)

    def test_all_13_geofence_combos_accepted(self):
        doc = json.loads(builtin_text("test_two_roles"))
        for stat, pred, act in legal_geofence_combos():
            doc["Drone_Config"]["BLUE"].update(
                {"Geofence_Stat": stat, "Geofence_Pred": pred, "Geofence_Act": act}
            )
            parse_test(doc)  # must not raise

    def test_unknown_hit_field_rejected(self):
        doc = json.loads(builtin_text("test_two_roles"))
        doc["Roles"][0]["HITS"][0]["Priority"] = "high"
        with pytest.raises(SchemaError):
            parse_test(doc)

    def test_negative_delay_rejected(self):
        doc = json.loads(builtin_text("test_two_roles"))
        doc["Roles"][0]["HITS"][0]["Delay"] = -1.0
        with pytest.raises(ConstraintError):
            parse_test(doc)

    def test_missing_precondition_rejected(self):
        doc = json.loads(builtin_text("test_two_roles"))
        del doc["Roles"][0]["HITS"][0]["Mode"]
        with pytest.raises(SchemaError):
            parse_test(doc)


class TestTaskPhrases:
    @pytest.mark.parametrize(
        "phrase,kind,argument",
        [
            ("SET MODE TO STABILIZED", "CHANGE-MODE", "STABILIZED"),
            ("SET MODE TO POSCTRL", "CHANGE-MODE", "POSCTL"),
            ("set mode to rtl", "CHANGE-MODE", "AUTO.RTL"),
            ("MOVE THROTTLE TO +1", "MOVE-THROTTLE", "MaxHIGH"),
            ("MOVE THROTTLE TO Neutral", "MOVE-THROTTLE", "Neutral"),
            ("MOVE THROTTLE TO -0.5", "MOVE-THROTTLE", "MedLOW"),
            ("PRESS KILL SWITCH", "KILL-MOTORS", None),
            ("PRESS RTL BUTTON", "PRESS-RTL", None),
            ("PRESS LAND BUTTON", "PRESS-LAND", None),
        ],
    )
    def test_parse(self, phrase, kind, argument):
        assert parse_task_phrase(phrase) == Task(kind, argument)

    def test_unknown_phrase_rejected(self):
        with pytest.raises(SchemaError):
            parse_task_phrase("DO A BARREL ROLL")

    def test_phrase_round_trip(self):
        for phrase in ("SET MODE TO ALTCTL", "MOVE THROTTLE TO MedHIGH", "PRESS KILL SWITCH"):
            assert parse_task_phrase(parse_task_phrase(phrase).phrase()) == parse_task_phrase(phrase)


MODES_ST = st.sampled_from(vocab.MODES)
STATES_ST = st.sampled_from(vocab.STATES)


def _task_strategy():
    return st.one_of(
        st.builds(Task, st.just("CHANGE-MODE"), MODES_ST),
        st.builds(Task, st.just("MOVE-THROTTLE"), st.sampled_from(vocab.THROTTLE_POSITIONS)),
        st.just(Task("KILL-MOTORS")),
        st.just(Task("PRESS-RTL")),
        st.just(Task("PRESS-LAND")),
    )


def _hit_strategy(ids):
    from dronefuzz.model import HIT

    return st.builds(
        HIT,
        hit_id=st.sampled_from(ids),
        drones=st.just(("BLUE",)),
        task=_task_strategy(),
        precondition_mode=MODES_ST,
        precondition_state=STATES_ST,
        precondition_params=st.just({}),
        delay_s=st.floats(min_value=0.0, max_value=30.0, allow_nan=False),
    )


def _test_strategy():
    from dronefuzz.model import FuzzTest, RoleScript

    geofence = st.sampled_from(legal_geofence_combos())
    config = geofence.map(
        lambda combo: {
            "BLUE": {
                "Geofence_Stat": combo[0],
                "Geofence_Pred": combo[1],
                "Geofence_Act": combo[2],
                "Throttle_Init": "Neutral",
            }
        }
    )
    role = st.builds(
        RoleScript,
        role=st.sampled_from(("RPIC", "MC", "SO")),
        interaction_device=st.sampled_from(("RC TRANSMITTER", "GUI")),
        hits=st.lists(_hit_strategy(("1", "2", "3")), max_size=3).map(tuple),
    )
    return st.builds(
        FuzzTest,
        test_id=st.text(alphabet="abcdef0123456789-", min_size=1, max_size=12),
        mission=st.just("BASIC-WAYPOINTS"),
        wind=st.builds(Wind, st.sampled_from(vocab.WIND_SPEEDS), st.just("NORTH")),
        drone_config=config,
        roles=st.lists(role, max_size=2).map(tuple),
        metadata=st.just({}),
    )


class TestRoundTrip:
    @settings(max_examples=200, deadline=None)
    @given(_test_strategy())
    def test_serialize_parse_identity(self, test):
        assert parse_test(serialize_test(test)) == test

    def test_fixture_round_trip(self):
        test = parse_test(builtin_text("test_two_roles"))
        assert parse_test(serialize_test(test)) == test
        assert parse_test(json.dumps(document_from_test(test))) == test


class TestValidate:
    def test_offboard_fly_reachable(self, space):
        test = _single_hit_test("OFFBOARD", "Fly")
        report = validate_test(test, space)
        assert not report.reference_errors
        assert report.hit_checks[0].reachable

    def test_stabilized_prearm_unreachable(self, space):
        test = _single_hit_test("STABILIZED", "Pre-arm")
        report = validate_test(test, space)
        assert not report.hit_checks[0].reachable
        assert report.potentially_invalid

    def test_induced_mode_change_extends_reachability(self, space):
        # First task switches to STABILIZED during Fly; the second's
        # (STABILIZED, Fly) precondition is then reachable.
        doc = json.loads(builtin_text("test_two_roles"))
        report = validate_test(parse_test(doc), space)
        assert [check.reachable for check in report.hit_checks] == [True, True, True]

    def test_unknown_drone_flagged(self, space):
        report = validate_test(parse_test(EXTERNAL_SHAPE_DOC), space)
        assert any("GREEN" in err for err in report.reference_errors)
        assert any("20KTS" in err for err in report.reference_errors)

    def test_every_state_reachable_under_offboard(self, space):
        for state in space.states:
            report = validate_test(_single_hit_test("OFFBOARD", state), space)
            assert report.hit_checks[0].reachable, state

    def test_no_tasks_after_motor_kill(self, space):
        doc = json.loads(builtin_text("test_two_roles"))
        doc["Roles"][0]["HITS"] = [
            {
                "ID": "1",
                "Drones": ["BLUE"],
                "Task": "PRESS KILL SWITCH",
                "Mode": "OFFBOARD",
                "State": "Fly",
            },
            {
                "ID": "2",
                "Drones": ["BLUE"],
                "Task": "SET MODE TO STABILIZED",
                "Mode": "OFFBOARD",
                "State": "Hover",
            },
        ]
        doc["Roles"] = doc["Roles"][:1]
        report = validate_test(parse_test(doc), space)
        assert report.hit_checks[0].reachable
        assert not report.hit_checks[1].reachable


def _single_hit_test(mode: str, state: str):
    from dronefuzz.model import FuzzTest, HIT, RoleScript

    hit = HIT(
        hit_id="1",
        drones=("BLUE",),
        task=Task("CHANGE-MODE", "STABILIZED"),
        precondition_mode=mode,
        precondition_state=state,
    )
    return FuzzTest(
        test_id=f"probe-{mode}-{state}".lower(),
        mission="BASIC-WAYPOINTS",
        wind=Wind(),
        drone_config={"BLUE": {}},
        roles=(RoleScript("RPIC", "RC TRANSMITTER", (hit,)),),
    )
