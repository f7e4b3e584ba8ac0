"""A scripted console client: the compliant operator, in software.

Used by the test suite to prove agent equivalence (a live session driven
with zero latency reproduces proxy runs byte for byte) and by tooling to
exercise a server without a browser. It acknowledges every precheck,
performs exactly the instructed control the moment a Go prompt arrives, and
answers the awareness questions with canned text.
"""

from __future__ import annotations

import socket

from .protocol import DIR_FROM_CONSOLE, SessionMessage, decode_message, encode_message


class ScriptedConsole:
    def __init__(
        self,
        host: str,
        port: int,
        answers: dict[str, str] | None = None,
        perform=None,
        timeout: float = 60.0,
    ):
        self.host = host
        self.port = port
        self.answers = answers or {
            "final-mode": "OFFBOARD",
            "anomaly": "no anomaly observed",
        }
        # perform(go_payload) -> control document; default performs as told.
        self.perform = perform or (lambda payload: payload["expected_control"])
        self.timeout = timeout
        self.transcript: list[str] = []
        self.results: list[dict] = []
        self._seq = 0

    def _send(self, file, kind: str, payload: dict) -> None:
        message = SessionMessage(DIR_FROM_CONSOLE, kind, self._seq, 0.0, payload)
        self._seq += 1
        line = encode_message(message)
        self.transcript.append(line)
        file.write(line.encode("utf-8") + b"\n")
        file.flush()

    def run(self) -> list[dict]:
        """Drive one full session; returns the TestResult payloads seen."""
        with socket.create_connection((self.host, self.port), timeout=self.timeout) as sock:
            sock.settimeout(self.timeout)
            file = sock.makefile("rwb")
            for raw in file:
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                self.transcript.append(line)
                message = decode_message(line)
                self._handle(file, message)
        return self.results

    def _handle(self, file, message: SessionMessage) -> None:
        if message.kind == "Precheck":
            for role in message.payload.get("expected_acks", []):
                self._send(file, "RoleAck", {"role": role})
        elif message.kind == "Go":
            control = self.perform(message.payload)
            if control is not None:
                self._send(
                    file,
                    "Control",
                    {"role": message.payload.get("role", ""), "control": control},
                )
        elif message.kind == "AwarenessQuestion":
            question_id = str(message.payload.get("question_id", ""))
            self._send(
                file,
                "AwarenessAnswer",
                {"question_id": question_id, "answer": self.answers.get(question_id, "")},
            )
        elif message.kind == "TestResult":
            self.results.append(dict(message.payload))
