"""Shared helpers for the JSON document formats (family/1, cert/1, report/1, trace/1).

Documents are plain dicts.  `produced_at` is the only non-deterministic
field; comparison tooling strips it before diffing.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__ as TOOL_VERSION


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def canonical_dumps(doc: dict[str, Any]) -> str:
    """Deterministic JSON rendering: sorted keys, no float shenanigans."""
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=True)


def write_doc(path: str | Path, doc: dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_dumps(doc) + "\n", encoding="ascii")
    return path


def read_doc(path: str | Path, expect_schema: str | None = None) -> dict[str, Any]:
    doc = json.loads(Path(path).read_text(encoding="ascii"))
    if expect_schema is not None and doc.get("schema") != expect_schema:
        raise ValueError(f"expected schema {expect_schema!r}, found {doc.get('schema')!r}")
    return doc


def strip_volatile(doc: dict[str, Any]) -> dict[str, Any]:
    """Copy of the document without the timestamp, for byte-level comparison."""
    return {key: val for key, val in doc.items() if key != "produced_at"}
