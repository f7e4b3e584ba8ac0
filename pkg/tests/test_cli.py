"""Command-line paths not already covered by the pipeline acceptance test."""

from __future__ import annotations

import json

from dronefuzz import cli
from dronefuzz.fuzzer import iter_corpus, read_corpus_meta, write_corpus
from dronefuzz.runner import read_profile, run_corpus, write_profile


def test_generate_random_sample_with_timing_fuzz(tmp_path):
    out = tmp_path / "sample.jsonl"
    rc = cli.main(
        [
            "generate",
            "--scenario",
            "builtin:scenario_full",
            "--sample",
            "25",
            "--seed",
            "3",
            "--max-delay",
            "4.0",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    meta = read_corpus_meta(out)
    assert meta["count"] == 25
    assert meta["generator"] == "random"
    assert meta["constraint"]["Name"] == "rc-interaction-full"
    tests = list(iter_corpus(out))
    delays = [hit.delay_s for test in tests for _, hit in test.all_hits()]
    assert all(0.0 <= d <= 4.0 for d in delays)
    assert any(d > 0.0 for d in delays)


def test_blueprint_command(tmp_path):
    out = tmp_path / "bp.log"
    rc = cli.main(["blueprint", "--mission", "BASIC-WAYPOINTS", "--wind", "NONE", "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("#%dronefuzz-flightlog")


def test_downselect_explicit_k(tmp_path, space, subgrid_corpus):
    # Enough valid rows for a real fit: only reachable preconditions.
    tests = [t for t in subgrid_corpus if t.roles[0].hits[0].precondition_mode == "OFFBOARD"]
    assert len(tests) >= 40
    corpus_path = tmp_path / "c.jsonl"
    write_corpus(corpus_path, tests, {"scenario": "reachable-only"})
    rows = run_corpus(tests, space, parallelism=4)
    profile_path = tmp_path / "p.csv"
    write_profile(profile_path, rows)
    rc = cli.main(
        [
            "downselect",
            "--profile",
            str(profile_path),
            "--corpus",
            str(corpus_path),
            "--k",
            "4",
            "--budget",
            "10:12",
            "--out",
            str(tmp_path / "l2.jsonl"),
            "--report",
            str(tmp_path / "sel.json"),
        ]
    )
    assert rc == 0
    selection = json.loads((tmp_path / "sel.json").read_text())
    assert 10 <= len(selection) <= 12
    assert {entry["cluster"] for entry in selection} == set(range(4)) or len(
        {entry["cluster"] for entry in selection}
    ) <= 4
    relabeled = read_profile(profile_path)
    assert all(r.cluster != "" for r in relabeled if r.is_valid_outcome)


def test_ledger_cli_round_trip(tmp_path, capsys):
    store = tmp_path / "ledger"
    rc = cli.main(
        ["ledger", "add", "--entry", "builtin:ledger_geofence_breach", "--store", str(store)]
    )
    assert rc == 0
    rc = cli.main(["ledger", "gate", "--id", "geofence-breach-flyaway", "--store", str(store)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "NOT READY FOR FIELD-TESTING" in out
    rc = cli.main(
        ["ledger", "gate", "--id", "geofence-breach-flyaway", "--store", str(store), "--strict"]
    )
    assert rc == 2
    rc = cli.main(["ledger", "export", "--store", str(store), "--out", str(tmp_path / "cleared.json")])
    assert rc == 0
    assert json.loads((tmp_path / "cleared.json").read_text()) == {}


def test_unknown_document_is_a_clean_error(tmp_path, capsys):
    rc = cli.main(["generate", "--space", "builtin:nope", "--out", str(tmp_path / "x")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
