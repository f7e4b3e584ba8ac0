"""Agents that perform interaction tasks when the runner dispatches them.

The runner drives a single tick loop and talks to its agent through three
calls: ``on_precondition_met`` (a task's gate just opened), ``on_dispatch``
(perform it now), and ``poll_controls`` (controls the agent wants applied at
this tick boundary). The proxy agent answers dispatches itself; a live
session forwards them to a human console and relays whatever the human
actually does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import RejectedInput
from ..model import vocab
from ..model.types import HIT, Task
from ..simulator.types import (
    CONTROL_KILL_MOTORS,
    CONTROL_SET_MODE,
    CONTROL_SET_THROTTLE,
    ControlInput,
)


def task_to_control(task: Task, issue_time: float = 0.0) -> ControlInput:
    """The control input a compliant operator performs for a task."""
    if task.kind == vocab.TASK_CHANGE_MODE:
        return ControlInput(CONTROL_SET_MODE, mode=task.argument, issue_time=issue_time)
    if task.kind == vocab.TASK_MOVE_THROTTLE:
        return ControlInput(
            CONTROL_SET_THROTTLE, throttle_position=task.argument, issue_time=issue_time
        )
    if task.kind == vocab.TASK_KILL_MOTORS:
        return ControlInput(CONTROL_KILL_MOTORS, issue_time=issue_time)
    if task.kind == vocab.TASK_PRESS_RTL:
        return ControlInput(CONTROL_SET_MODE, mode="AUTO.RTL", issue_time=issue_time)
    if task.kind == vocab.TASK_PRESS_LAND:
        return ControlInput(CONTROL_SET_MODE, mode="AUTO.LAND", issue_time=issue_time)
    raise RejectedInput(f"no control mapping for task kind {task.kind!r}")


@dataclass
class ProxyHumanAgent:
    """Software stand-in for the operator: performs every task as instructed.

    ``reaction_latency_s`` models human reaction time between the dispatch
    prompt and the control actually happening; the default is instantaneous.
    """

    reaction_latency_s: float = 0.0
    _outbox: list[tuple[float, str, ControlInput]] = field(default_factory=list)

    def begin_test(self, test) -> None:
        self._outbox.clear()

    def on_precondition_met(self, world, role: str, hit: HIT) -> None:
        pass

    def on_dispatch(self, world, role: str, hit: HIT) -> None:
        due = world.state.time + self.reaction_latency_s
        self._outbox.append((due, role, task_to_control(hit.task, issue_time=due)))

    def poll_controls(self, world) -> list[tuple[str, ControlInput]]:
        now = world.state.time
        due = [(t, r, c) for (t, r, c) in self._outbox if t <= now]
        self._outbox = [(t, r, c) for (t, r, c) in self._outbox if t > now]
        return [(r, c) for (_, r, c) in due]

    def on_no_more_tasks(self, world) -> None:
        pass

    def end_test(self, execution) -> None:
        pass
