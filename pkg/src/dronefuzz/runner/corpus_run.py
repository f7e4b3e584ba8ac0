"""Corpus execution: isolated worlds, optional process parallelism.

Every test runs in its own fresh world, so back-to-back execution equals
isolated execution by construction. Parallel workers each recompute nothing
shared: blueprints are produced once in the parent and shipped to workers,
and the profile keeps corpus order whatever the worker count, so the output
bytes are independent of ``parallelism``.
"""

from __future__ import annotations

import multiprocessing
from pathlib import Path

from ..model.documents import parse_test, serialize_test
from ..model.types import FuzzSpace, FuzzTest, Wind
from ..oracle.classify import Thresholds, classify
from ..oracle.features import extract_features
from ..simulator.flightlog import FlightLog
from ..simulator.world import run_mission
from .agents import ProxyHumanAgent
from .execute import execute_test
from .profile import OUTCOME_ABORTED, ProfileRow, row_from_test

_worker_state: dict = {}


def blueprint_log(space: FuzzSpace, mission_name: str, wind: Wind) -> FlightLog:
    """Reference log: the mission flown with zero interaction tasks.

    Wind is part of the expected context, so each (mission, wind) pair gets
    its own blueprint and drift alone never inflates the deviation metric.
    """
    mission = space.missions[mission_name]
    return run_mission(
        mission,
        wind=(wind.speed, wind.direction),
        allowed_modes=space.modes,
        meta={"blueprint": True},
    )


def blueprint_key(mission_name: str, wind: Wind) -> str:
    return f"{mission_name}_{wind.key()}"


def collect_blueprints(space: FuzzSpace, corpus: list[FuzzTest]) -> dict[str, FlightLog]:
    blueprints: dict[str, FlightLog] = {}
    for test in corpus:
        key = blueprint_key(test.mission, test.wind)
        if key not in blueprints:
            blueprints[key] = blueprint_log(space, test.mission, test.wind)
    return blueprints


def _run_one(
    test: FuzzTest, space: FuzzSpace, blueprints: dict[str, FlightLog], thresholds: Thresholds
) -> tuple[ProfileRow, str]:
    execution = execute_test(test, agent=ProxyHumanAgent(), space=space)
    log = execution.log
    blueprint = blueprints[blueprint_key(test.mission, test.wind)]
    if execution.aborted:
        record = extract_features(log, blueprint, test_id=test.test_id)
        return row_from_test(test, record, OUTCOME_ABORTED), log.to_text()
    record = extract_features(
        log, blueprint, test_id=test.test_id, hit_never_met=execution.never_met()
    )
    label = classify(record, thresholds, blueprint.duration())
    return row_from_test(test, record, label.value), log.to_text()


def _init_worker(space_doc: str, blueprint_texts: dict[str, str], thresholds_doc: dict) -> None:
    from ..model.documents import parse_fuzz_space

    _worker_state["space"] = parse_fuzz_space(space_doc)
    _worker_state["blueprints"] = {
        key: FlightLog.from_text(text) for key, text in blueprint_texts.items()
    }
    _worker_state["thresholds"] = Thresholds.from_document(thresholds_doc)


def _worker(test_doc: str) -> tuple[ProfileRow, str]:
    test = parse_test(test_doc)
    return _run_one(
        test, _worker_state["space"], _worker_state["blueprints"], _worker_state["thresholds"]
    )


def run_corpus(
    corpus: list[FuzzTest],
    space: FuzzSpace,
    parallelism: int = 1,
    thresholds: Thresholds | None = None,
    logs_dir: str | Path | None = None,
    blueprints: dict[str, FlightLog] | None = None,
) -> list[ProfileRow]:
    """Execute every test and return profile rows in corpus order."""
    if not corpus:
        raise ValueError("corpus is empty")
    thresholds = thresholds or Thresholds()
    blueprints = blueprints or collect_blueprints(space, corpus)

    if parallelism <= 1:
        results = [_run_one(test, space, blueprints, thresholds) for test in corpus]
    else:
        from ..model.documents import serialize_space

        ctx = multiprocessing.get_context("spawn")
        blueprint_texts = {key: log.to_text() for key, log in blueprints.items()}
        with ctx.Pool(
            processes=parallelism,
            initializer=_init_worker,
            initargs=(serialize_space(space), blueprint_texts, thresholds.to_document()),
        ) as pool:
            results = pool.map(_worker, [serialize_test(t) for t in corpus], chunksize=8)

    if logs_dir is not None:
        logs_dir = Path(logs_dir)
        logs_dir.mkdir(parents=True, exist_ok=True)
        for key, log in blueprints.items():
            (logs_dir / f"blueprint_{key}.log").write_text(log.to_text(), encoding="utf-8")
        for test, (_, log_text) in zip(corpus, results):
            (logs_dir / f"{test.test_id}.log").write_text(log_text, encoding="utf-8")

    return [row for row, _ in results]
