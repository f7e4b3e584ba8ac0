"""Line-delimited test corpus files.

First line is a metadata header, then one compact test document per line:

    #%dronefuzz-corpus v1 {"space": "...", "scenario": "...", "count": 630, ...}
    {"Test_ID": "t000000", ...}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from ..errors import SchemaError
from ..model.documents import parse_test, serialize_test
from ..model.types import FuzzTest

_HEADER_PREFIX = "#%dronefuzz-corpus v1 "


def write_corpus(path: str | Path, tests: Iterable[FuzzTest], meta: dict) -> int:
    """Write a corpus; the header's ``count`` is filled with the actual count."""
    path = Path(path)
    count = 0
    body: list[str] = []
    for test in tests:
        body.append(serialize_test(test))
        count += 1
    header_meta = {**meta, "count": count}
    with path.open("w", encoding="utf-8") as fh:
        fh.write(_HEADER_PREFIX + json.dumps(header_meta, sort_keys=True) + "\n")
        for line in body:
            fh.write(line + "\n")
    return count


def read_corpus_meta(path: str | Path) -> dict:
    with Path(path).open("r", encoding="utf-8") as fh:
        first = fh.readline()
    if not first.startswith(_HEADER_PREFIX):
        raise SchemaError(f"{path}: not a corpus file (missing header)")
    return json.loads(first[len(_HEADER_PREFIX):])


def iter_corpus(path: str | Path) -> Iterator[FuzzTest]:
    with Path(path).open("r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith(_HEADER_PREFIX):
            raise SchemaError(f"{path}: not a corpus file (missing header)")
        for line in fh:
            line = line.strip()
            if line:
                yield parse_test(line)


def read_corpus(path: str | Path) -> list[FuzzTest]:
    return list(iter_corpus(path))
