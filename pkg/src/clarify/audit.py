"""Append-only decision audit log: line-delimited JSON, one record per line.

Writers serialize appends through a lock so lines never interleave; readers
tolerate corrupt lines, reporting the line number and carrying on. A
successful decision record stores the full query, the effective template,
and the config fingerprint, which together are sufficient to replay the
decision deterministically.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from .errors import StorageError


class AuditWriter:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        """Write one record as a single line. Raises StorageError on failure."""
        line = json.dumps(record, separators=(",", ":"), sort_keys=True)
        try:
            with self._lock:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
                    fh.flush()
        except OSError as exc:
            raise StorageError(f"cannot append audit record: {exc}") from exc


def read_audit_log(path: str | Path) -> tuple[list[dict], list[tuple[int, str]]]:
    """All parseable records plus (line_number, problem) for the rest."""
    records: list[dict] = []
    problems: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                record = json.loads(stripped)
            except json.JSONDecodeError as exc:
                problems.append((line_no, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(record, dict):
                problems.append((line_no, "record is not an object"))
                continue
            records.append(record)
    return records, problems
