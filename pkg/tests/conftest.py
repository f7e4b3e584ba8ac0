from __future__ import annotations

import pytest

from dronefuzz.data import builtin_text
from dronefuzz.fuzzer import enumerate_scenario, parse_scenario
from dronefuzz.model import TestOutcomeKind, parse_fuzz_space

# Library type whose name happens to match pytest's collection pattern.
TestOutcomeKind.__test__ = False


@pytest.fixture(scope="session")
def space():
    return parse_fuzz_space(builtin_text("space_default"))


@pytest.fixture(scope="session")
def full_scenario():
    return parse_scenario(builtin_text("scenario_full"))


@pytest.fixture(scope="session")
def subgrid_scenario():
    return parse_scenario(builtin_text("scenario_subgrid"))


@pytest.fixture(scope="session")
def subgrid_corpus(space, subgrid_scenario):
    return list(enumerate_scenario(space, subgrid_scenario))


def free_port() -> int:
    import socket

    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]
