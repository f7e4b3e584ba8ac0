"""Packaged fixture documents: the default space, scenarios, and samples.

Builtin names usable anywhere a CLI flag takes a document path, via the
``builtin:<name>`` prefix:

    space_default            the full experiment space
    scenario_full            full scenario cross product over that space
    scenario_subgrid         pinned sub-grid for a quick end-to-end pipeline
    test_two_roles           a two-role test document (throttle move, mode
                             switch, then a GUI return-to-launch)
    ledger_geofence_breach   worked mitigation-ledger entry
"""

from __future__ import annotations

import importlib.resources

BUILTIN_NAMES = (
    "space_default",
    "scenario_full",
    "scenario_subgrid",
    "test_two_roles",
    "ledger_geofence_breach",
)


def builtin_text(name: str) -> str:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"no builtin document named {name!r}; have {BUILTIN_NAMES}")
    return (
        importlib.resources.files("dronefuzz.data").joinpath(f"{name}.json").read_text()
    )


def resolve_document(path_or_builtin: str) -> str:
    """Return document text for a path, or for ``builtin:<name>``."""
    if path_or_builtin.startswith("builtin:"):
        return builtin_text(path_or_builtin.split(":", 1)[1])
    with open(path_or_builtin, "r", encoding="utf-8") as fh:
        return fh.read()
