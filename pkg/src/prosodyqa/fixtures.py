"""Loader for externally published judgment files.

The companion data release ships per-engine judgment tables; this
reader is deliberately tolerant about layout: it scans a directory for
CSV (or JSON Lines) files, assigns each file to an engine by filename,
and maps columns to the four rating dimensions plus worker/item/typed
answer by fuzzy header matching.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

log = logging.getLogger(__name__)

_ENGINE_HINTS = {
    "ibm": ("ibm", "watson", "lisa"),
    "google": ("google", "wavenet"),
}

_COLUMN_HINTS = {
    "informativeness": ("informativeness", "informative"),
    "elocution": ("elocution", "pronunciation", "pronounce"),
    "interruption": ("interruption", "interrupt"),
    "length_rating": ("length",),
    "worker_id": ("worker", "rater", "judge", "contributor"),
    "item_id": ("item", "unit", "question_id", "pair"),
    "typed_key": ("typed", "short_answer", "answer_key", "key_answer"),
    "kind": ("modification", "prosody", "kind", "condition", "treatment"),
}


def _match_column(header: str) -> str | None:
    lowered = header.strip().lower()
    for canonical, hints in _COLUMN_HINTS.items():
        if any(h in lowered for h in hints):
            return canonical
    return None


def _engine_for(path: Path) -> str | None:
    name = path.name.lower()
    for engine, hints in _ENGINE_HINTS.items():
        if any(h in name for h in hints):
            return engine
    return None


def _rows_from_csv(path: Path) -> list[dict]:
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames:
            return []
        mapping = {}
        for header in reader.fieldnames:
            canonical = _match_column(header)
            if canonical and canonical not in mapping.values():
                mapping[header] = canonical
        rows = []
        for raw in reader:
            row = {}
            for header, canonical in mapping.items():
                value = raw.get(header)
                if canonical in ("informativeness", "elocution", "interruption", "length_rating"):
                    try:
                        value = int(float(value))
                    except (TypeError, ValueError):
                        value = None
                row[canonical] = value
            rows.append(row)
        return rows


def _rows_from_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            row = {}
            for header, value in raw.items():
                canonical = _match_column(str(header))
                if canonical and canonical not in row:
                    row[canonical] = value
            rows.append(row)
    return rows


def load_published_judgments(directory: str | Path) -> dict[str, list[dict]]:
    """Scan a fixtures directory, returning canonicalized judgment rows
    per engine ("ibm" / "google").  Files that match no engine hint are
    ignored with a log line."""
    directory = Path(directory)
    per_engine: dict[str, list[dict]] = {}
    for path in sorted(directory.rglob("*")):
        if path.suffix.lower() not in (".csv", ".jsonl", ".json"):
            continue
        engine = _engine_for(path)
        if engine is None:
            log.info("skipping %s: engine not identifiable from name", path.name)
            continue
        if path.suffix.lower() == ".csv":
            rows = _rows_from_csv(path)
        else:
            rows = _rows_from_jsonl(path)
        if rows:
            per_engine.setdefault(engine, []).extend(rows)
    return per_engine


def rating_matrix(rows: list[dict], dimension: str) -> list[list[int | None]]:
    """Items-by-raters matrix for one dimension, for agreement stats."""
    workers = sorted({str(r.get("worker_id")) for r in rows if r.get("worker_id") is not None})
    worker_col = {w: i for i, w in enumerate(workers)}
    by_item: dict[str, list] = {}
    for r in rows:
        item = r.get("item_id")
        worker = r.get("worker_id")
        value = r.get(dimension)
        if item is None or worker is None or value is None:
            continue
        row = by_item.setdefault(str(item), [None] * len(workers))
        row[worker_col[str(worker)]] = value
    return [by_item[k] for k in sorted(by_item)]
