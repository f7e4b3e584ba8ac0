"""Result profile: one CSV row per executed test.

Columns combine the test's fuzzed parameters with the extracted outcome
features; ``outcome`` is the label and ``cluster`` is filled in by
downselection. All numeric formatting is fixed so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from pathlib import Path

from ..errors import SchemaError
from ..model import vocab
from ..model.types import FuzzTest, TestOutcomeKind
from ..oracle.features import OutcomeRecord

COLUMNS = (
    "test_id",
    "initial_mode",
    "mission_state",
    "gf",
    "gf_pred",
    "gf_act",
    "wind",
    "switch_mode",
    "kill_switch",
    "throttle_pos",
    "max_deviation",
    "max_altitude",
    "duration",
    "landed",
    "mission_complete",
    "freefall",
    "final_disarm",
    "hard_landing",
    "touchdown_speed",
    "hit_never_met",
    "outcome",
    "cluster",
)

OUTCOME_ABORTED = "Aborted"


@dataclass(frozen=True)
class ProfileRow:
    test_id: str
    initial_mode: str
    mission_state: str
    gf: str
    gf_pred: str
    gf_act: str
    wind: str
    switch_mode: str
    kill_switch: bool
    throttle_pos: str
    max_deviation: float
    max_altitude: float
    duration: float
    landed: bool
    mission_complete: bool
    freefall: bool
    final_disarm: bool
    hard_landing: bool
    touchdown_speed: float
    hit_never_met: bool
    outcome: str
    cluster: str = ""

    def record(self) -> OutcomeRecord:
        """Rebuild the analysis-facing outcome record from a profile row."""
        return OutcomeRecord(
            test_id=self.test_id,
            max_deviation=self.max_deviation,
            max_altitude=self.max_altitude,
            duration=self.duration,
            landed=self.landed,
            freefall=self.freefall,
            mission_complete=self.mission_complete,
            final_disarm=self.final_disarm,
            hard_landing=self.hard_landing,
            touchdown_speed=self.touchdown_speed,
            hit_never_met=self.hit_never_met,
        )

    def with_outcome(self, outcome: str) -> "ProfileRow":
        return replace(self, outcome=outcome)

    def with_cluster(self, cluster: str) -> "ProfileRow":
        return replace(self, cluster=cluster)

    @property
    def is_valid_outcome(self) -> bool:
        return self.outcome in (
            TestOutcomeKind.VALID_NOMINAL.value,
            TestOutcomeKind.VALID_ABNORMAL.value,
        )


def _bool(value: bool) -> str:
    return "TRUE" if value else "FALSE"


def _parse_bool(text: str) -> bool:
    return text.strip().upper() == "TRUE"


def row_from_test(test: FuzzTest, record: OutcomeRecord, outcome: str) -> ProfileRow:
    drone = test.primary_drone()
    stat, pred, act = test.geofence_params(drone)
    switch_mode = "None"
    kill = False
    first_hit = None
    for _, hit in test.all_hits():
        if first_hit is None:
            first_hit = hit
        if hit.task.kind == vocab.TASK_CHANGE_MODE and switch_mode == "None":
            switch_mode = hit.task.argument or "None"
        if hit.task.kind == vocab.TASK_KILL_MOTORS:
            kill = True
    return ProfileRow(
        test_id=test.test_id,
        initial_mode=first_hit.precondition_mode if first_hit else "None",
        mission_state=first_hit.precondition_state if first_hit else "None",
        gf=stat,
        gf_pred=pred,
        gf_act=act,
        wind=test.wind.key(),
        switch_mode=switch_mode,
        kill_switch=kill,
        throttle_pos=test.throttle_init(drone),
        max_deviation=record.max_deviation,
        max_altitude=record.max_altitude,
        duration=record.duration,
        landed=record.landed,
        mission_complete=record.mission_complete,
        freefall=record.freefall,
        final_disarm=record.final_disarm,
        hard_landing=record.hard_landing,
        touchdown_speed=record.touchdown_speed,
        hit_never_met=record.hit_never_met,
        outcome=outcome,
    )


def _format_row(row: ProfileRow) -> list[str]:
    return [
        row.test_id,
        row.initial_mode,
        row.mission_state,
        row.gf,
        row.gf_pred,
        row.gf_act,
        row.wind,
        row.switch_mode,
        "Yes" if row.kill_switch else "No",
        row.throttle_pos,
        format(row.max_deviation, ".2f"),
        format(row.max_altitude, ".2f"),
        format(row.duration, ".1f"),
        _bool(row.landed),
        _bool(row.mission_complete),
        _bool(row.freefall),
        _bool(row.final_disarm),
        _bool(row.hard_landing),
        format(row.touchdown_speed, ".2f"),
        _bool(row.hit_never_met),
        row.outcome,
        row.cluster,
    ]


def write_profile(path: str | Path, rows: list[ProfileRow]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(_format_row(row))
    Path(path).write_text(buffer.getvalue(), encoding="utf-8")


def read_profile(path: str | Path) -> list[ProfileRow]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != COLUMNS:
            raise SchemaError(f"{path}: unexpected profile columns")
        rows = []
        for fields in reader:
            if not fields:
                continue
            rows.append(
                ProfileRow(
                    test_id=fields[0],
                    initial_mode=fields[1],
                    mission_state=fields[2],
                    gf=fields[3],
                    gf_pred=fields[4],
                    gf_act=fields[5],
                    wind=fields[6],
                    switch_mode=fields[7],
                    kill_switch=fields[8] == "Yes",
                    throttle_pos=fields[9],
                    max_deviation=float(fields[10]),
                    max_altitude=float(fields[11]),
                    duration=float(fields[12]),
                    landed=_parse_bool(fields[13]),
                    mission_complete=_parse_bool(fields[14]),
                    freefall=_parse_bool(fields[15]),
                    final_disarm=_parse_bool(fields[16]),
                    hard_landing=_parse_bool(fields[17]),
                    touchdown_speed=float(fields[18]),
                    hit_never_met=_parse_bool(fields[19]),
                    outcome=fields[20],
                    cluster=fields[21] if len(fields) > 21 else "",
                )
            )
    return rows
