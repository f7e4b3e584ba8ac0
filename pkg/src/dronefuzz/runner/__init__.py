from .agents import ProxyHumanAgent, task_to_control
from .corpus_run import blueprint_key, blueprint_log, collect_blueprints, run_corpus
from .execute import (
    STATUS_DISPATCHED,
    STATUS_NEVER_MET,
    STATUS_PENDING,
    STATUS_PERFORMED,
    STATUS_PRECONDITION_MET,
    HitStatus,
    TestExecution,
    execute_test,
    precondition_met,
    setup_from_test,
)
from .profile import COLUMNS, OUTCOME_ABORTED, ProfileRow, read_profile, row_from_test, write_profile

__all__ = [
    "COLUMNS",
    "HitStatus",
    "OUTCOME_ABORTED",
    "ProfileRow",
    "ProxyHumanAgent",
    "STATUS_DISPATCHED",
    "STATUS_NEVER_MET",
    "STATUS_PENDING",
    "STATUS_PERFORMED",
    "STATUS_PRECONDITION_MET",
    "TestExecution",
    "blueprint_key",
    "blueprint_log",
    "collect_blueprints",
    "execute_test",
    "precondition_met",
    "read_profile",
    "row_from_test",
    "run_corpus",
    "setup_from_test",
    "task_to_control",
    "write_profile",
]
