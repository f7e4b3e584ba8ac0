"""Oracle: deviation metric vs brute force, feature extraction, labeling."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from dronefuzz._kernels import fallback
from dronefuzz.errors import EmptyLog
from dronefuzz.model import TestOutcomeKind
from dronefuzz.oracle import OutcomeRecord, Thresholds, classify, extract_features, max_deviation
from dronefuzz.runner.corpus_run import blueprint_log
from dronefuzz.simulator import ControlInput, DroneSetup, Mission, run_mission
from dronefuzz.simulator.types import CONTROL_KILL_MOTORS
from dronefuzz.model.types import Wind

MISSION = Mission("BASIC-WAYPOINTS", 12.5, ((0.0, 30.0, 12.5), (0.0, 60.0, 12.5)), 5.0, 30.0)


def brute_force_directed(a: np.ndarray, b: np.ndarray) -> float:
    """Independent O(n*m) reference: plain Python loops, no early exit."""
    worst = 0.0
    for i in range(len(a)):
        nearest = math.inf
        for j in range(len(b)):
            dx = a[i][0] - b[j][0]
            dy = a[i][1] - b[j][1]
            dz = a[i][2] - b[j][2]
            d = dx * dx + dy * dy + dz * dz
            if d < nearest:
                nearest = d
        if nearest > worst:
            worst = nearest
    return math.sqrt(worst)


class TestMaxDeviation:
    def test_identical_logs_zero(self):
        points = np.random.default_rng(0).normal(size=(50, 3))
        assert max_deviation(points, points) == 0.0

    def test_hand_computed_case(self):
        blueprint = [(0.0, 0.0, 0.0), (0.0, 0.0, 10.0)]
        log = [(3.0, 4.0, 0.0)]
        # max(5, sqrt(9 + 16 + 100)) = sqrt(125)
        assert max_deviation(blueprint, log) == pytest.approx(math.sqrt(125.0), abs=1e-12)

    def test_directed_not_symmetric(self):
        a = [(0.0, 0.0, 0.0)]
        b = [(0.0, 0.0, 0.0), (100.0, 0.0, 0.0)]
        assert max_deviation(a, b) == 0.0
        assert max_deviation(b, a) == pytest.approx(100.0)

    def test_kernel_matches_brute_force_on_random_pairs(self):
        rng = np.random.default_rng(1234)
        for _ in range(30):
            n = int(rng.integers(1, 60))
            m = int(rng.integers(1, 60))
            a = rng.normal(scale=40.0, size=(n, 3))
            b = rng.normal(scale=40.0, size=(m, 3))
            expected = brute_force_directed(a, b)
            assert max_deviation(a, b) == pytest.approx(expected, abs=1e-9)
            assert fallback.directed_max_min_distance(a, b) == pytest.approx(expected, abs=1e-9)

    def test_superset_never_increases(self):
        rng = np.random.default_rng(7)
        blueprint = rng.normal(size=(40, 3))
        log = rng.normal(size=(40, 3))
        with_more = np.vstack([log, rng.normal(size=(20, 3))])
        assert max_deviation(blueprint, with_more) <= max_deviation(blueprint, log) + 1e-12

    def test_empty_log_rejected(self):
        with pytest.raises(EmptyLog):
            max_deviation([], [(0.0, 0.0, 0.0)])
        with pytest.raises(EmptyLog):
            max_deviation([(0.0, 0.0, 0.0)], np.zeros((0, 3)))


class TestExtractFeatures:
    def test_blueprint_against_itself(self):
        blueprint = run_mission(MISSION, DroneSetup())
        record = extract_features(blueprint, blueprint, test_id="bp")
        assert record.max_deviation == 0.0
        assert record.mission_complete
        assert record.landed
        assert record.final_disarm
        assert not record.freefall
        assert not record.hard_landing

    def test_kill_flight_features(self):
        blueprint = run_mission(MISSION, DroneSetup())
        log = run_mission(
            MISSION,
            DroneSetup(),
            controls=[ControlInput(CONTROL_KILL_MOTORS, issue_time=16.0)],
        )
        record = extract_features(log, blueprint, test_id="kill")
        assert record.freefall
        assert record.landed
        assert record.final_disarm
        assert not record.mission_complete
        assert record.touchdown_speed > 2.0
        assert record.max_deviation > 5.0


def nominal_record(**overrides) -> OutcomeRecord:
    base = dict(
        test_id="r",
        max_deviation=0.1,
        max_altitude=12.6,
        duration=58.2,
        landed=True,
        freefall=False,
        mission_complete=True,
        final_disarm=True,
        hard_landing=False,
        touchdown_speed=1.0,
        hit_never_met=False,
    )
    base.update(overrides)
    return OutcomeRecord(**base)


class TestClassify:
    BP_DURATION = 58.2

    def test_nominal(self):
        label = classify(nominal_record(), Thresholds(), self.BP_DURATION)
        assert label is TestOutcomeKind.VALID_NOMINAL

    def test_high_altitude_incomplete_is_abnormal(self):
        record = nominal_record(max_altitude=93.55, mission_complete=False)
        assert classify(record, Thresholds(), self.BP_DURATION) is TestOutcomeKind.VALID_ABNORMAL

    def test_never_met_precedence(self):
        record = nominal_record(hit_never_met=True)
        assert classify(record, Thresholds(), self.BP_DURATION) is TestOutcomeKind.INVALID_UNTESTED

    @pytest.mark.parametrize(
        "overrides",
        [
            {"mission_complete": False},
            {"final_disarm": False},
            {"max_altitude": 20.01},
            {"duration": 2.0 * 58.2 + 0.1},
            {"freefall": True},
            {"touchdown_speed": 2.01},
            {"max_deviation": 5.01},
        ],
    )
    def test_each_criterion_alone_trips(self, overrides):
        record = nominal_record(**overrides)
        assert classify(record, Thresholds(), self.BP_DURATION) is TestOutcomeKind.VALID_ABNORMAL

    def test_monotonicity_under_random_worsening(self):
        # Worsening any single feature never flips Abnormal back to Nominal.
        rng = np.random.default_rng(99)
        thresholds = Thresholds()
        worsenings = (
            lambda r, s: dataclasses.replace(r, max_deviation=r.max_deviation + s * 10),
            lambda r, s: dataclasses.replace(r, max_altitude=r.max_altitude + s * 30),
            lambda r, s: dataclasses.replace(r, duration=r.duration + s * 200),
            lambda r, s: dataclasses.replace(r, touchdown_speed=r.touchdown_speed + s * 5),
            lambda r, s: dataclasses.replace(r, freefall=True),
            lambda r, s: dataclasses.replace(r, mission_complete=False),
            lambda r, s: dataclasses.replace(r, final_disarm=False),
        )
        rank = {
            TestOutcomeKind.VALID_NOMINAL: 0,
            TestOutcomeKind.VALID_ABNORMAL: 1,
            TestOutcomeKind.INVALID_UNTESTED: 1,
        }
        for _ in range(1000):
            record = nominal_record(
                max_deviation=float(rng.uniform(0, 8)),
                max_altitude=float(rng.uniform(5, 30)),
                duration=float(rng.uniform(30, 150)),
                touchdown_speed=float(rng.uniform(0, 3)),
                freefall=bool(rng.integers(2)),
                mission_complete=bool(rng.integers(2)),
                final_disarm=bool(rng.integers(2)),
            )
            before = classify(record, thresholds, self.BP_DURATION)
            worsen = worsenings[int(rng.integers(len(worsenings)))]
            after = classify(worsen(record, float(rng.uniform(0, 1))), thresholds, self.BP_DURATION)
            assert rank[after] >= rank[before]

    def test_labels_are_pure(self):
        record = nominal_record(max_altitude=25.0)
        a = classify(record, Thresholds(), self.BP_DURATION)
        b = classify(record, Thresholds(), self.BP_DURATION)
        assert a is b is TestOutcomeKind.VALID_ABNORMAL

    def test_thresholds_must_be_positive(self):
        with pytest.raises(ValueError):
            Thresholds(deviation_limit_m=0.0)


class TestBlueprintPerWind:
    def test_wind_context_does_not_inflate_deviation(self, space):
        # A drifting-wind blueprint compared with a same-wind run: zero
        # deviation; compared with the calm blueprint it would not be zero.
        windy = blueprint_log(space, "BASIC-WAYPOINTS", Wind("MEDIUM", "NORTH"))
        windy_again = blueprint_log(space, "BASIC-WAYPOINTS", Wind("MEDIUM", "NORTH"))
        assert max_deviation(windy, windy_again) == 0.0
