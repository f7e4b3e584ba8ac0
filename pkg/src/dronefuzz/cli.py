"""Pipeline command line.

    dronefuzz generate   --space S --scenario C --out corpus.jsonl
    dronefuzz blueprint  --mission M --wind W --out blueprint.log
    dronefuzz run-l1     --corpus corpus.jsonl --out profile.csv --logs DIR
    dronefuzz analyze    --profile profile.csv --blueprint DIR|FILE
    dronefuzz downselect --profile profile.csv --corpus corpus.jsonl \
                         --budget 25:30 --out l2corpus.jsonl
    dronefuzz serve-l2   --corpus l2corpus.jsonl --port 8765
    dronefuzz ledger     add|gate|report|export ...

Document flags accept file paths or ``builtin:<name>`` fixtures. The
``DRONEFUZZ_DATA_DIR`` environment variable sets the default ledger store
location (default ``./dronefuzz-data``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .data import resolve_document
from .errors import DronefuzzError
from .fuzzer import (
    count_scenario,
    enumerate_scenario,
    fuzz_timing,
    iter_corpus,
    parse_scenario,
    read_corpus,
    read_corpus_meta,
    sample_random,
    write_corpus,
)
from .gateway import (
    LedgerStore,
    choose_k_elbow,
    feature_matrix,
    grouped_model,
    kmeans,
    ledger_gate,
    parse_ledger_entry,
    standardize,
    zscore_select,
)
from .gateway.cluster import SMALL_CORPUS_THRESHOLD
from .model import TestOutcomeKind, Wind, parse_fuzz_space, space_hash
from .oracle import Thresholds, classify
from .runner import read_profile, run_corpus, write_profile
from .runner.corpus_run import blueprint_log
from .service import PACE_LOCKSTEP, PACE_REALTIME, serve_l2
from .simulator import FlightLog


def _data_dir() -> Path:
    return Path(os.environ.get("DRONEFUZZ_DATA_DIR", "dronefuzz-data"))


def _load_space(flag: str):
    return parse_fuzz_space(resolve_document(flag))


def _parse_wind(text: str) -> Wind:
    if text.upper() in ("NONE", "CALM"):
        return Wind("NONE", "NORTH")
    speed, _, direction = text.partition("-")
    return Wind(speed.upper(), (direction or "NORTH").upper())


def _parse_budget(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    low = int(lo)
    high = int(hi) if sep else low
    return (low, high)


def cmd_generate(args) -> int:
    space = _load_space(args.space)
    scenario = parse_scenario(resolve_document(args.scenario))
    meta = {
        "space": space_hash(space),
        "scenario": scenario.name,
        "constraint": scenario.to_document(),
        "seed": args.seed,
        "generator": "random" if args.sample is not None else "enumeration",
    }
    if args.sample is not None:
        tests = sample_random(space, scenario, seed=args.seed or 0, n=args.sample)
    else:
        tests = enumerate_scenario(space, scenario)
    if args.max_delay is not None:
        base = args.timing_seed if args.timing_seed is not None else (args.seed or 0)
        meta.update({"timing_seed": base, "max_delay_s": args.max_delay})
        tests = (
            fuzz_timing(test, seed=base + i, max_delay_s=args.max_delay)
            for i, test in enumerate(tests)
        )
    started = time.monotonic()
    count = write_corpus(args.out, tests, meta)
    elapsed = time.monotonic() - started
    expected = count_scenario(space, scenario) if args.sample is None else args.sample
    print(
        f"generated {count} tests (expected {expected}) in {elapsed:.1f}s "
        f"-> {args.out} [space {meta['space']}, scenario {scenario.name}]"
    )
    return 0


def cmd_blueprint(args) -> int:
    space = _load_space(args.space)
    wind = _parse_wind(args.wind)
    log = blueprint_log(space, args.mission, wind)
    Path(args.out).write_text(log.to_text(), encoding="utf-8")
    final = log.samples[-1]
    print(
        f"blueprint {args.mission} wind={wind.key()}: duration {log.duration():.1f}s, "
        f"max altitude {max(s.z for s in log.samples):.2f}m, "
        f"landed={'yes' if final.z <= 0.05 else 'no'} -> {args.out}"
    )
    return 0


def cmd_run_l1(args) -> int:
    space = _load_space(args.space)
    meta = read_corpus_meta(args.corpus)
    corpus = read_corpus(args.corpus)
    started = time.monotonic()
    rows = run_corpus(
        corpus,
        space,
        parallelism=args.parallel,
        logs_dir=args.logs,
        thresholds=_load_thresholds(args.thresholds),
    )
    write_profile(args.out, rows)
    elapsed = time.monotonic() - started
    by_outcome: dict[str, int] = {}
    for row in rows:
        by_outcome[row.outcome] = by_outcome.get(row.outcome, 0) + 1
    print(
        f"executed {len(rows)} tests in {elapsed:.1f}s "
        f"(corpus {meta.get('scenario', '?')}, parallel {args.parallel}) -> {args.out}"
    )
    for outcome in sorted(by_outcome):
        print(f"  {outcome or '(none)'}: {by_outcome[outcome]}")
    return 0


def _load_thresholds(flag: str | None) -> Thresholds:
    if not flag or flag == "default":
        return Thresholds()
    return Thresholds.from_document(json.loads(resolve_document(flag)))


def _blueprint_durations(flag: str) -> dict[str, float]:
    """wind key -> blueprint duration, from one log file or a directory."""
    path = Path(flag)
    files = sorted(path.glob("blueprint_*.log")) if path.is_dir() else [path]
    durations = {}
    for file in files:
        log = FlightLog.from_text(file.read_text(encoding="utf-8"))
        wind = Wind(log.meta.get("wind_speed", "NONE"), log.meta.get("wind_direction", "NORTH"))
        durations[wind.key()] = log.duration()
    if not durations:
        raise DronefuzzError(f"no blueprint logs found at {flag}")
    return durations


def cmd_analyze(args) -> int:
    rows = read_profile(args.profile)
    thresholds = _load_thresholds(args.thresholds)
    durations = _blueprint_durations(args.blueprint)
    fallback = next(iter(durations.values()))
    relabeled = []
    for row in rows:
        if row.outcome == "Aborted":
            relabeled.append(row)
            continue
        label = classify(row.record(), thresholds, durations.get(row.wind, fallback))
        relabeled.append(row.with_outcome(label.value))
    out = args.out or args.profile
    write_profile(out, relabeled)
    counts: dict[str, int] = {}
    for row in relabeled:
        counts[row.outcome] = counts.get(row.outcome, 0) + 1
    print(f"labeled {len(relabeled)} rows -> {out}")
    for outcome in sorted(counts):
        print(f"  {outcome}: {counts[outcome]}")
    return 0


def cmd_downselect(args) -> int:
    rows = read_profile(args.profile)
    valid = [row for row in rows if row.is_valid_outcome]
    if not valid:
        raise DronefuzzError("profile has no Valid-Nominal/Valid-Abnormal rows to cluster")
    records = [row.record() for row in valid]
    points, scaling = standardize(feature_matrix(records))

    if len(valid) < SMALL_CORPUS_THRESHOLD:
        # Too few outcomes for a meaningful fit: group by test type instead.
        model = grouped_model(points, [_test_type(row) for row in valid], scaling=scaling)
        k = model.k
        method = f"type groups (corpus < {SMALL_CORPUS_THRESHOLD})"
    elif args.k == "auto":
        hi = max(2, min(12, len(valid) - 1))
        k = choose_k_elbow(points, (1, hi), seed=args.seed)
        model = kmeans(points, k, seed=args.seed, scaling=scaling)
        method = "k-means (elbow)"
    else:
        k = int(args.k)
        model = kmeans(points, k, seed=args.seed, scaling=scaling)
        method = "k-means"

    abnormal = [row.outcome == TestOutcomeKind.VALID_ABNORMAL.value for row in valid]
    report = zscore_select(
        model, points, [row.test_id for row in valid], abnormal, _parse_budget(args.budget)
    )
    selected_ids = report.test_ids()

    cluster_of = {row.test_id: str(int(c)) for row, c in zip(valid, model.assignments)}
    rows = [row.with_cluster(cluster_of.get(row.test_id, "")) for row in rows]
    write_profile(args.profile, rows)

    if args.corpus:
        by_id = {}
        for test in iter_corpus(args.corpus):
            if test.test_id in selected_ids:
                by_id[test.test_id] = test
        missing = [tid for tid in selected_ids if tid not in by_id]
        if missing:
            raise DronefuzzError(f"selected tests missing from corpus: {missing[:5]}")
        write_corpus(
            args.out,
            [by_id[tid] for tid in selected_ids],
            {"selection": "downselect", "source_profile": str(args.profile), "k": k},
        )
    else:
        Path(args.out).write_text("\n".join(selected_ids) + "\n", encoding="utf-8")

    if args.report:
        Path(args.report).write_text(
            json.dumps(
                [
                    {
                        "test_id": s.test_id,
                        "cluster": s.cluster,
                        "distance": round(s.distance, 6),
                        "zscore": round(s.zscore, 6),
                        "reason": s.reason,
                    }
                    for s in report.selected
                ],
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
    print(
        f"clustered {len(valid)} valid tests into k={k} via {method}; "
        f"selected {len(selected_ids)} (budget {args.budget}) -> {args.out}"
    )
    return 0


def _test_type(row) -> tuple[str, str]:
    """(task kind, geofence status) grouping key for small corpora."""
    if row.kill_switch:
        kind = "KILL-MOTORS"
    elif row.switch_mode != "None":
        kind = "CHANGE-MODE"
    else:
        kind = "MOVE-THROTTLE"
    return (kind, row.gf)


def cmd_serve_l2(args) -> int:
    space = _load_space(args.space)
    corpus = read_corpus(args.corpus)
    print(f"serving {len(corpus)} tests on {args.host}:{args.port} (pace {args.pace})")
    rows = serve_l2(
        corpus,
        space,
        host=args.host,
        port=args.port,
        pace=args.pace,
        heartbeat_timeout=args.heartbeat,
        out_dir=args.out,
        max_sessions=args.max_sessions,
    )
    print(f"completed {len(rows)}/{len(corpus)} tests")
    for row in rows:
        print(f"  {row.test_id}: {row.outcome}")
    return 0 if len(rows) == len(corpus) else 1


def cmd_ledger(args) -> int:
    store = LedgerStore(args.store or (_data_dir() / "ledger"))
    if args.ledger_command == "add":
        entry = parse_ledger_entry(resolve_document(args.entry))
        path = store.add(entry)
        print(f"added ledger entry {entry.entry_id} -> {path}")
        return 0
    if args.ledger_command == "gate":
        entry = store.load(args.id)
        result = ledger_gate(entry)
        print(result.report)
        if not result.ready:
            for diagnostic in result.diagnostics:
                print(f"  blocked: {diagnostic}")
        if args.strict and not result.ready:
            return 2
        return 0
    if args.ledger_command == "report":
        entry = store.load(args.id)
        print(ledger_gate(entry).report)
        return 0
    if args.ledger_command == "export":
        cleared = store.export_cleared()
        text = json.dumps(cleared, indent=2, sort_keys=True) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
            print(f"exported {len(cleared)} cleared entries -> {args.out}")
        else:
            print(text, end="")
        return 0
    raise DronefuzzError(f"unknown ledger command {args.ledger_command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dronefuzz",
        description="Human-interaction fuzz testing for simulated small uncrewed aircraft.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a test corpus from a space and scenario")
    p.add_argument("--space", default="builtin:space_default")
    p.add_argument("--scenario", default="builtin:scenario_full")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sample", type=int, default=None, help="random sample size instead of enumeration")
    p.add_argument("--max-delay", type=float, default=None, help="timing fuzz: max dispatch delay (s)")
    p.add_argument("--timing-seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("blueprint", help="record the zero-interaction reference flight")
    p.add_argument("--space", default="builtin:space_default")
    p.add_argument("--mission", required=True)
    p.add_argument("--wind", default="NONE", help="NONE or SPEED-DIRECTION, e.g. MEDIUM-NORTH")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_blueprint)

    p = sub.add_parser("run-l1", help="execute a corpus with the proxy operator")
    p.add_argument("--space", default="builtin:space_default")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="profile CSV path")
    p.add_argument("--logs", default=None, help="directory for per-test flight logs")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--thresholds", default=None, help="JSON thresholds document")
    p.set_defaults(func=cmd_run_l1)

    p = sub.add_parser("analyze", help="relabel a profile against a blueprint and thresholds")
    p.add_argument("--profile", required=True)
    p.add_argument("--blueprint", required=True, help="blueprint log file or logs directory")
    p.add_argument("--thresholds", default=None)
    p.add_argument("--out", default=None, help="output profile (default: in place)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("downselect", help="cluster outcomes and pick the live-session corpus")
    p.add_argument("--profile", required=True)
    p.add_argument("--corpus", default=None, help="source corpus to copy selected tests from")
    p.add_argument("--k", default="auto", help="cluster count or 'auto' (elbow)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", default="25:30", help="selection size range, e.g. 25:30")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="optional selection report JSON")
    p.set_defaults(func=cmd_downselect)

    p = sub.add_parser("serve-l2", help="serve tests to a live operator console")
    p.add_argument("--space", default="builtin:space_default")
    p.add_argument("--corpus", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--pace", choices=(PACE_REALTIME, PACE_LOCKSTEP), default=PACE_REALTIME)
    p.add_argument("--heartbeat", type=float, default=30.0)
    p.add_argument("--out", default=None, help="output directory (profile, logs, transcripts)")
    p.add_argument("--max-sessions", type=int, default=None)
    p.set_defaults(func=cmd_serve_l2)

    p = sub.add_parser("ledger", help="mitigation ledger and field-readiness gate")
    ledger_sub = p.add_subparsers(dest="ledger_command", required=True)
    q = ledger_sub.add_parser("add")
    q.add_argument("--entry", required=True, help="ledger entry JSON document")
    q.add_argument("--store", default=None)
    q.set_defaults(func=cmd_ledger)
    q = ledger_sub.add_parser("gate")
    q.add_argument("--id", required=True)
    q.add_argument("--store", default=None)
    q.add_argument("--strict", action="store_true", help="exit nonzero when not ready")
    q.set_defaults(func=cmd_ledger)
    q = ledger_sub.add_parser("report")
    q.add_argument("--id", required=True)
    q.add_argument("--store", default=None)
    q.set_defaults(func=cmd_ledger)
    q = ledger_sub.add_parser("export")
    q.add_argument("--store", default=None)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_ledger)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DronefuzzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
