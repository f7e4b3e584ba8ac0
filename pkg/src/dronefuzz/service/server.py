"""Live-session service: one operator console steering the simulated tests.

The server accepts one console session at a time and walks it through the
corpus: a precheck summary (acknowledged by every declared role), then the
mission with Plan/Go prompts per interaction task, live telemetry, awareness
questions, and a result message.

Pacing is injected: ``realtime`` sleeps one tick per tick so a human can
react; ``lockstep`` never sleeps and instead blocks the simulation while a
prompted task is unperformed, which makes scripted sessions byte-identical
to proxy runs.
"""

from __future__ import annotations

import json
import queue
import socket
import threading
from collections import deque
from pathlib import Path

from ..errors import AgentUnavailable, RejectedInput, SchemaError
from ..model.types import FuzzSpace, FuzzTest
from ..oracle.classify import Thresholds, classify
from ..oracle.features import extract_features
from ..runner.agents import task_to_control
from ..runner.corpus_run import blueprint_key, collect_blueprints
from ..runner.execute import execute_test
from ..runner.profile import ProfileRow, row_from_test
from ..simulator.types import ControlInput
from ..simulator.world import DT
from .protocol import (
    DIR_FROM_CONSOLE,
    DIR_TO_CONSOLE,
    SessionMessage,
    decode_message,
    encode_message,
)

PACE_REALTIME = "realtime"
PACE_LOCKSTEP = "lockstep"

AWARENESS_QUESTIONS = (
    ("final-mode", "Which flight mode do you believe the vehicle ended the test in?"),
    ("anomaly", "Did you perceive any anomaly during the flight? Describe it briefly."),
)

TELEMETRY_EVERY_TICKS = 2  # 5 Hz at the 0.1 s tick


class SessionClosed(AgentUnavailable):
    """The console connection dropped or timed out."""


class SessionChannel:
    """Framed, sequence-checked message channel over one socket."""

    def __init__(self, sock: socket.socket, heartbeat_timeout: float = 30.0):
        self._sock = sock
        sock.settimeout(None)
        self._reader_file = sock.makefile("rb")
        self._writer_file = sock.makefile("wb")
        self.heartbeat_timeout = heartbeat_timeout
        self._send_seq = 0
        self._recv_seq = -1
        self._inbox: queue.Queue = queue.Queue()
        self._closed = threading.Event()
        self.transcript: list[str] = []
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        try:
            for raw in self._reader_file:
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                try:
                    message = decode_message(line)
                except (SchemaError, RejectedInput):
                    continue  # junk lines are dropped, the session survives
                if message.direction != DIR_FROM_CONSOLE or message.seq <= self._recv_seq:
                    continue
                self._recv_seq = message.seq
                self.transcript.append(line)
                self._inbox.put(message)
        except (OSError, ValueError):
            pass
        finally:
            self._closed.set()
            self._inbox.put(None)

    def send(self, kind: str, payload: dict, timestamp: float) -> None:
        if self._closed.is_set():
            raise SessionClosed("console connection closed")
        message = SessionMessage(DIR_TO_CONSOLE, kind, self._send_seq, timestamp, payload)
        self._send_seq += 1
        line = encode_message(message)
        self.transcript.append(line)
        try:
            self._writer_file.write(line.encode("utf-8") + b"\n")
            self._writer_file.flush()
        except (OSError, ValueError) as exc:
            self._closed.set()
            raise SessionClosed(f"console connection lost: {exc}") from exc

    def recv(self, timeout: float | None) -> SessionMessage | None:
        try:
            message = self._inbox.get(timeout=timeout)
        except queue.Empty:
            return None
        if message is None:
            raise SessionClosed("console connection closed")
        return message

    def drain(self) -> list[SessionMessage]:
        out = []
        while True:
            try:
                message = self._inbox.get_nowait()
            except queue.Empty:
                return out
            if message is None:
                if out:
                    self._inbox.put(None)
                    return out
                raise SessionClosed("console connection closed")
            out.append(message)

    def close(self) -> None:
        self._closed.set()
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        for stream in (self._writer_file, self._reader_file):
            try:
                stream.close()
            except (OSError, ValueError):
                pass
        self._sock.close()


class LiveSessionAgent:
    """Runner-facing agent that relays prompts to, and controls from, a console."""

    def __init__(self, channel: SessionChannel, lockstep: bool):
        self.channel = channel
        self.lockstep = lockstep
        self._awaiting: set[str] = set()
        self._tick = 0
        self._stash: list[SessionMessage] = []
        self.answers: dict[str, str] = {}

    def begin_test(self, test: FuzzTest) -> None:
        self._awaiting.clear()
        self._tick = 0

    def on_precondition_met(self, world, role: str, hit) -> None:
        self.channel.send(
            "Plan",
            {
                "role": role,
                "hit_id": hit.hit_id,
                "task": hit.task.phrase(),
                "mode": hit.precondition_mode,
                "state": hit.precondition_state,
            },
            world.state.time,
        )

    def on_dispatch(self, world, role: str, hit) -> None:
        self.channel.send(
            "Go",
            {
                "role": role,
                "hit_id": hit.hit_id,
                "task": hit.task.phrase(),
                "expected_control": task_to_control(hit.task).to_document(),
            },
            world.state.time,
        )
        self._awaiting.add(role)

    def poll_controls(self, world) -> list[tuple[str, ControlInput]]:
        self._tick += 1
        if self._tick % TELEMETRY_EVERY_TICKS == 0:
            state = world.state
            self.channel.send(
                "Telemetry",
                {
                    "t": round(state.time, 3),
                    "x": round(state.x, 3),
                    "y": round(state.y, 3),
                    "z": round(state.z, 3),
                    "vx": round(state.vx, 3),
                    "vy": round(state.vy, 3),
                    "vz": round(state.vz, 3),
                    "mode": state.mode,
                    "lifecycle": state.lifecycle,
                    "armed": state.armed,
                    "motors_on": state.motors_on,
                    "distance_home": round(state.horizontal_distance_from_home(), 3),
                    "fence_breached": world.fence_breached,
                },
                state.time,
            )

        messages = list(self._stash)
        self._stash.clear()
        messages.extend(self.channel.drain())
        while self.lockstep and self._awaiting and not any(m.kind == "Control" for m in messages):
            # Hold the simulation until the operator acts (or the session dies).
            waited = self.channel.recv(timeout=self.channel.heartbeat_timeout)
            if waited is None:
                raise SessionClosed("operator did not act within the heartbeat timeout")
            messages.append(waited)
            messages.extend(self.channel.drain())

        controls: list[tuple[str, ControlInput]] = []
        for message in messages:
            if message.kind == "Control":
                role = str(message.payload.get("role", ""))
                try:
                    control = ControlInput.from_document(
                        message.payload.get("control", {}), issue_time=world.state.time
                    )
                except RejectedInput:
                    continue
                controls.append((role, control))
                self._awaiting.discard(role)
            elif message.kind == "AwarenessAnswer":
                self.answers[str(message.payload.get("question_id", ""))] = str(
                    message.payload.get("answer", "")
                )
        return controls

    def on_no_more_tasks(self, world) -> None:
        self.channel.send("NoMoreTasks", {}, world.state.time)

    def end_test(self, execution) -> None:
        pass


def _wait_for_acks(channel: SessionChannel, expected: list[str]) -> None:
    missing = set(expected)
    while missing:
        message = channel.recv(timeout=channel.heartbeat_timeout)
        if message is None:
            raise SessionClosed("precheck was never acknowledged")
        if message.kind == "RoleAck":
            missing.discard(str(message.payload.get("role", "")))


def _precheck_payload(test: FuzzTest) -> dict:
    roles = []
    for script in test.roles:
        roles.append(
            {
                "role": script.role,
                "interaction_device": script.interaction_device,
                "tasks": [
                    {
                        "hit_id": hit.hit_id,
                        "task": hit.task.phrase(),
                        "mode": hit.precondition_mode,
                        "state": hit.precondition_state,
                    }
                    for hit in script.hits
                ],
            }
        )
    expected = [script.role for script in test.roles] or ["TESTER"]
    drone = test.primary_drone()
    stat, pred, act = test.geofence_params(drone)
    return {
        "test_id": test.test_id,
        "mission": test.mission,
        "wind": test.wind.key(),
        "drone": drone,
        "geofence": {"status": stat, "prediction": pred, "action": act},
        "safety_notes": "Observe the vehicle at all times; safety first, the test second.",
        "roles": roles,
        "expected_acks": expected,
    }


def _ask_awareness(channel: SessionChannel, agent: LiveSessionAgent, timestamp: float) -> dict:
    answers = dict(agent.answers)
    for question_id, text in AWARENESS_QUESTIONS:
        channel.send("AwarenessQuestion", {"question_id": question_id, "text": text}, timestamp)
        while question_id not in answers:
            message = channel.recv(timeout=channel.heartbeat_timeout)
            if message is None:
                answers[question_id] = ""
                break
            if message.kind == "AwarenessAnswer":
                answers[str(message.payload.get("question_id", ""))] = str(
                    message.payload.get("answer", "")
                )
    return answers


def serve_l2(
    corpus: list[FuzzTest],
    space: FuzzSpace,
    host: str = "127.0.0.1",
    port: int = 8765,
    pace: str = PACE_REALTIME,
    heartbeat_timeout: float = 30.0,
    out_dir: str | Path | None = None,
    max_sessions: int | None = None,
    thresholds: Thresholds | None = None,
    ready_event: threading.Event | None = None,
) -> list[ProfileRow]:
    """Serve the corpus to live console sessions; returns the profile rows.

    A dropped session aborts the in-flight test and re-queues it for the next
    session. ``max_sessions`` bounds how many sessions are accepted (None
    serves until the corpus is done); a bound port raises OSError at startup.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    thresholds = thresholds or Thresholds()
    blueprints = collect_blueprints(space, corpus)
    pending = deque(corpus)
    rows: list[ProfileRow] = []
    transcripts: list[list[str]] = []
    sessions = 0

    server_sock = socket.create_server((host, port))
    server_sock.settimeout(heartbeat_timeout * 4)
    if ready_event is not None:
        ready_event.set()
    try:
        while pending and (max_sessions is None or sessions < max_sessions):
            try:
                conn, _ = server_sock.accept()
            except socket.timeout:
                break
            sessions += 1
            channel = SessionChannel(conn, heartbeat_timeout=heartbeat_timeout)
            try:
                while pending:
                    test = pending[0]
                    row, log_text, answers = _run_live_test(
                        test, space, channel, pace, thresholds, blueprints
                    )
                    pending.popleft()
                    rows.append(row)
                    _write_outputs(out_dir, test, row, log_text, answers, rows)
            except SessionClosed:
                pass  # current test stays queued for the next session
            finally:
                transcripts.append(list(channel.transcript))
                if out_dir is not None:
                    session_path = Path(out_dir)
                    session_path.mkdir(parents=True, exist_ok=True)
                    (session_path / f"session_{sessions:02d}.transcript.jsonl").write_text(
                        "\n".join(channel.transcript) + "\n", encoding="utf-8"
                    )
                channel.close()
    finally:
        server_sock.close()

    return rows


def _run_live_test(
    test: FuzzTest,
    space: FuzzSpace,
    channel: SessionChannel,
    pace: str,
    thresholds: Thresholds,
    blueprints,
) -> tuple[ProfileRow, str, dict]:
    precheck = _precheck_payload(test)
    channel.send("Precheck", precheck, 0.0)
    _wait_for_acks(channel, precheck["expected_acks"])

    agent = LiveSessionAgent(channel, lockstep=(pace == PACE_LOCKSTEP))
    execution = execute_test(
        test,
        agent=agent,
        space=space,
        pace_s=DT if pace == PACE_REALTIME else 0.0,
    )
    log = execution.log
    end_time = log.duration()

    if execution.aborted:
        raise SessionClosed(execution.abort_reason or "session aborted")

    answers = _ask_awareness(channel, agent, end_time)
    blueprint = blueprints[blueprint_key(test.mission, test.wind)]
    record = extract_features(
        log, blueprint, test_id=test.test_id, hit_never_met=execution.never_met()
    )
    label = classify(record, thresholds, blueprint.duration())
    row = row_from_test(test, record, label.value)
    channel.send(
        "TestResult",
        {
            "test_id": test.test_id,
            "outcome": label.value,
            "aborted": False,
            "features": {
                "max_deviation": round(record.max_deviation, 3),
                "max_altitude": round(record.max_altitude, 3),
                "duration": round(record.duration, 1),
                "landed": record.landed,
                "freefall": record.freefall,
                "mission_complete": record.mission_complete,
                "final_disarm": record.final_disarm,
            },
        },
        end_time,
    )
    return row, log.to_text(), answers


def _write_outputs(
    out_dir: str | Path | None,
    test: FuzzTest,
    row: ProfileRow,
    log_text: str,
    answers: dict,
    rows: list[ProfileRow],
) -> None:
    if out_dir is None:
        return
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{test.test_id}.log").write_text(log_text, encoding="utf-8")
    with (out_dir / "annotations.jsonl").open("a", encoding="utf-8") as fh:
        fh.write(json.dumps({"test_id": test.test_id, "answers": answers}, sort_keys=True) + "\n")
    from ..runner.profile import write_profile

    write_profile(out_dir / "profile.csv", rows)
