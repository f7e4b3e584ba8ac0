"""Test generation: exhaustive scenario enumeration, seeded sampling, timing fuzz.

Enumeration is a deterministic lexicographic walk over the scenario's
dimensions in the fixed order

    mode, state, initial throttle, geofence combination, wind, task, argument

where every list follows the space's declaration order. The argument slot is
carried uniformly across task kinds: for a mode change it selects the target
mode, for a throttle move the target detent, and for the kill switch it is
carried but unused; tests that differ only in an unused argument are tagged
``semantic_duplicate`` in their metadata (or skipped entirely when the
scenario sets ``Dedupe_Semantic``).
"""

from __future__ import annotations

import dataclasses
from typing import Iterator

import numpy as np

from ..errors import ConstraintError
from ..model.documents import space_hash
from ..model.types import (
    HIT,
    PARAM_GEOFENCE_ACT,
    PARAM_GEOFENCE_PRED,
    PARAM_GEOFENCE_STAT,
    PARAM_THROTTLE_INIT,
    FuzzSpace,
    FuzzTest,
    RoleScript,
    Task,
    Wind,
)
from .constraint import ResolvedScenario, ScenarioConstraint, resolve

RNG_NAME = "pcg64"


def _task_argument(space: FuzzSpace, task_kind: str, arg_index: int) -> tuple[str | None, bool]:
    """(argument, is_semantic_duplicate) for one argument slot index."""
    template = space.tasks[task_kind]
    if not template.arguments:
        return None, arg_index > 0
    return (
        template.arguments[arg_index % len(template.arguments)],
        arg_index >= len(template.arguments),
    )


def _arg_range(space: FuzzSpace, scenario: ResolvedScenario, task_kind: str) -> range:
    if not scenario.dedupe_semantic:
        return range(scenario.arg_slots)
    return range(max(len(space.tasks[task_kind].arguments), 1))


def _build_test(
    space: FuzzSpace,
    scenario: ResolvedScenario,
    index: int,
    mode: str,
    state: str,
    throttle: str,
    geofence: tuple[str, str, str],
    wind: tuple[str, str],
    task_kind: str,
    arg_index: int,
    space_digest: str,
) -> FuzzTest:
    argument, duplicate = _task_argument(space, task_kind, arg_index)
    hit = HIT(
        hit_id="1",
        drones=(scenario.drone,),
        task=Task(task_kind, argument),
        precondition_mode=mode,
        precondition_state=state,
    )
    metadata = {
        "generator": "enumeration",
        "space": space_digest,
        "scenario": scenario.name,
        "arg_index": arg_index,
        "semantic_duplicate": duplicate,
    }
    return FuzzTest(
        test_id=f"t{index:06d}",
        mission=scenario.mission,
        wind=Wind(*wind),
        drone_config={
            scenario.drone: {
                PARAM_GEOFENCE_STAT: geofence[0],
                PARAM_GEOFENCE_PRED: geofence[1],
                PARAM_GEOFENCE_ACT: geofence[2],
                PARAM_THROTTLE_INIT: throttle,
            }
        },
        roles=(RoleScript(scenario.role, scenario.device, (hit,)),),
        metadata=metadata,
    )


def enumerate_scenario(space: FuzzSpace, constraint: ScenarioConstraint) -> Iterator[FuzzTest]:
    """Deterministic lexicographic enumeration of every legal combination."""
    scenario = resolve(space, constraint)
    digest = space_hash(space)
    index = 0
    for mode in scenario.modes:
        for state in scenario.states:
            for throttle in scenario.throttle:
                for geofence in scenario.geofence:
                    for wind in scenario.wind:
                        for task_kind in scenario.tasks:
                            template = space.tasks[task_kind]
                            if mode not in template.precondition_modes:
                                continue
                            if state not in template.precondition_states:
                                continue
                            for arg_index in _arg_range(space, scenario, task_kind):
                                yield _build_test(
                                    space,
                                    scenario,
                                    index,
                                    mode,
                                    state,
                                    throttle,
                                    geofence,
                                    wind,
                                    task_kind,
                                    arg_index,
                                    digest,
                                )
                                index += 1


def count_scenario(space: FuzzSpace, constraint: ScenarioConstraint) -> int:
    """Exact size of the enumeration, computed combinatorially."""
    scenario = resolve(space, constraint)
    base = len(scenario.throttle) * len(scenario.geofence) * len(scenario.wind)
    total = 0
    for task_kind in scenario.tasks:
        template = space.tasks[task_kind]
        n_modes = sum(1 for m in scenario.modes if m in template.precondition_modes)
        n_states = sum(1 for s in scenario.states if s in template.precondition_states)
        total += n_modes * n_states * base * len(_arg_range(space, scenario, task_kind))
    return total


def sample_random(
    space: FuzzSpace, constraint: ScenarioConstraint, seed: int, n: int
) -> list[FuzzTest]:
    """Draw ``n`` tests uniformly from the constrained legal space.

    Uniformity is over exactly the combinations ``enumerate_scenario`` would
    emit; the same seed always yields the same list.
    """
    if n < 0:
        raise ConstraintError("sample size must be >= 0")
    scenario = resolve(space, constraint)
    digest = space_hash(space)
    task_arg_pairs = [
        (task_kind, arg_index)
        for task_kind in scenario.tasks
        for arg_index in _arg_range(space, scenario, task_kind)
    ]
    rng = np.random.default_rng(seed)
    out: list[FuzzTest] = []
    attempts = 0
    max_attempts = max(10_000, 1_000 * max(n, 1))
    while len(out) < n:
        attempts += 1
        if attempts > max_attempts:
            raise ConstraintError("sampling keeps hitting illegal combinations; space too constrained")
        mode = scenario.modes[int(rng.integers(len(scenario.modes)))]
        state = scenario.states[int(rng.integers(len(scenario.states)))]
        throttle = scenario.throttle[int(rng.integers(len(scenario.throttle)))]
        geofence = scenario.geofence[int(rng.integers(len(scenario.geofence)))]
        wind = scenario.wind[int(rng.integers(len(scenario.wind)))]
        task_kind, arg_index = task_arg_pairs[int(rng.integers(len(task_arg_pairs)))]
        template = space.tasks[task_kind]
        if mode not in template.precondition_modes or state not in template.precondition_states:
            continue
        test = _build_test(
            space,
            scenario,
            len(out),
            mode,
            state,
            throttle,
            geofence,
            wind,
            task_kind,
            arg_index,
            digest,
        )
        metadata = {**test.metadata, "generator": "random", "seed": seed, "rng": RNG_NAME}
        out.append(
            dataclasses.replace(test, test_id=f"r{seed}-{len(out):06d}", metadata=metadata)
        )
    return out


def fuzz_timing(test: FuzzTest, seed: int, max_delay_s: float) -> FuzzTest:
    """Assign each task a seeded uniform dispatch delay in [0, max_delay_s]."""
    if max_delay_s < 0:
        raise ConstraintError("max_delay_s must be >= 0")
    rng = np.random.default_rng(seed)
    roles = []
    for script in test.roles:
        hits = tuple(
            dataclasses.replace(hit, delay_s=float(rng.uniform(0.0, max_delay_s)))
            for hit in script.hits
        )
        roles.append(dataclasses.replace(script, hits=hits))
    metadata = {
        **test.metadata,
        "timing_seed": seed,
        "timing_rng": RNG_NAME,
        "max_delay_s": max_delay_s,
    }
    return dataclasses.replace(test, roles=tuple(roles), metadata=metadata)
