from .protocol import (
    DIR_FROM_CONSOLE,
    DIR_TO_CONSOLE,
    KINDS_FROM_CONSOLE,
    KINDS_TO_CONSOLE,
    SessionMessage,
    decode_message,
    encode_message,
)
from .scripted import ScriptedConsole
from .server import PACE_LOCKSTEP, PACE_REALTIME, SessionClosed, serve_l2

__all__ = [
    "DIR_FROM_CONSOLE",
    "DIR_TO_CONSOLE",
    "KINDS_FROM_CONSOLE",
    "KINDS_TO_CONSOLE",
    "PACE_LOCKSTEP",
    "PACE_REALTIME",
    "ScriptedConsole",
    "SessionClosed",
    "SessionMessage",
    "decode_message",
    "encode_message",
    "serve_l2",
]
