from . import vocab
from .documents import (
    parse_fuzz_space,
    parse_task_phrase,
    parse_test,
    serialize_space,
    serialize_test,
    space_hash,
    document_from_test,
)
from .types import (
    HIT,
    FuzzSpace,
    FuzzTest,
    RoleScript,
    Task,
    TaskTemplate,
    TestOutcomeKind,
    Wind,
    check_geofence_params,
    legal_geofence_combos,
)
from .validate import HitCheck, ValidityReport, nominal_pairs, validate_test

__all__ = [
    "HIT",
    "FuzzSpace",
    "FuzzTest",
    "HitCheck",
    "RoleScript",
    "Task",
    "TaskTemplate",
    "TestOutcomeKind",
    "ValidityReport",
    "Wind",
    "check_geofence_params",
    "legal_geofence_combos",
    "nominal_pairs",
    "parse_fuzz_space",
    "parse_task_phrase",
    "parse_test",
    "serialize_space",
    "serialize_test",
    "space_hash",
    "document_from_test",
    "validate_test",
    "vocab",
]
