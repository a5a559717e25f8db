"""Annotation records on disk, and parsing of model outputs.

Record files are UTF-8 JSON Lines, one sentence per line::

    {"id": "d1-s1", "sentence": "...", "dct": "1998-02-13",
     "items": [{"time_text": "recent years", "scate": "Last(...)"}]}

``dct`` is optional.  Normalized records add, per item, either a ``value``
(``{"kind": ..., "value": ...}``) or an ``error`` (``{"category": ...,
"message": ...}``).
"""
from __future__ import annotations

import dataclasses
import datetime
import json
import logging
import os
from collections.abc import Iterable

from .dsl import execute, serialize_value
from .errors import SchemaError, ScateError, UnparseableOutputError

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class AnnotationItem:
    time_text: str
    scate: str


@dataclasses.dataclass(frozen=True)
class AnnotationRecord:
    id: str
    sentence: str
    items: tuple[AnnotationItem, ...] = ()
    dct: datetime.date | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "sentence": self.sentence}
        if self.dct is not None:
            out["dct"] = self.dct.isoformat()
        out["items"] = [{"time_text": i.time_text, "scate": i.scate} for i in self.items]
        return out


@dataclasses.dataclass(frozen=True)
class NormalizedItem:
    time_text: str
    scate: str
    value: dict | None = None
    error: dict | None = None

    def __post_init__(self):
        if (self.value is None) == (self.error is None):
            raise ValueError("a normalized item has exactly one of value and error")

    def to_json(self) -> dict:
        out = {"time_text": self.time_text, "scate": self.scate}
        if self.value is not None:
            out["value"] = self.value
        else:
            out["error"] = self.error
        return out


@dataclasses.dataclass(frozen=True)
class NormalizedRecord:
    id: str
    sentence: str
    items: tuple[NormalizedItem, ...] = ()
    dct: datetime.date | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "sentence": self.sentence}
        if self.dct is not None:
            out["dct"] = self.dct.isoformat()
        out["items"] = [i.to_json() for i in self.items]
        return out


def _require(obj: dict, key: str, kind: type, line: int):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", line)
    if not isinstance(obj[key], kind):
        raise SchemaError(f"field {key!r} must be {kind.__name__}, got {type(obj[key]).__name__}", line)
    return obj[key]


def record_from_json(obj, line: int | None = None) -> AnnotationRecord:
    if not isinstance(obj, dict):
        raise SchemaError("a record must be a JSON object", line)
    record_id = _require(obj, "id", str, line)
    sentence = _require(obj, "sentence", str, line)
    dct = obj.get("dct")
    if dct is not None:
        if not isinstance(dct, str):
            raise SchemaError("field 'dct' must be an ISO date string", line)
        try:
            dct = datetime.date.fromisoformat(dct)
        except ValueError:
            raise SchemaError(f"field 'dct' is not an ISO date: {dct!r}", line) from None
    items = []
    for raw in _require(obj, "items", list, line):
        if not isinstance(raw, dict):
            raise SchemaError("each item must be a JSON object", line)
        items.append(AnnotationItem(_require(raw, "time_text", str, line), _require(raw, "scate", str, line)))
    return AnnotationRecord(record_id, sentence, tuple(items), dct)


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _read_lines(path: str | os.PathLike):
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, 1):
            if line.strip():
                yield number, line


def load_records(path: str | os.PathLike) -> list[AnnotationRecord]:
    """Read a record file, keeping file order.  Raises SchemaError with the line number."""
    records, seen = [], set()
    for number, line in _read_lines(path):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e.msg}", number) from None
        record = record_from_json(obj, number)
        if record.id in seen:
            raise SchemaError(f"duplicate record id {record.id!r}", number)
        seen.add(record.id)
        records.append(record)
    return records


def save_records(records: Iterable[AnnotationRecord | NormalizedRecord], path: str | os.PathLike):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(_dumps(record.to_json()) + "\n")


def dumps_records(records: Iterable[AnnotationRecord | NormalizedRecord]) -> str:
    return "".join(_dumps(r.to_json()) + "\n" for r in records)


def load_normalized_records(path: str | os.PathLike) -> list[NormalizedRecord]:
    out = []
    for number, line in _read_lines(path):
        obj = json.loads(line)
        base = record_from_json(obj, number)
        items = tuple(NormalizedItem(raw["time_text"], raw["scate"], raw.get("value"), raw.get("error"))
                      for raw in obj["items"])
        out.append(NormalizedRecord(base.id, base.sentence, items, base.dct))
    return out


# ---------------------------------------------------------------------------
# model outputs

def _balanced_lists(text: str):
    """Yield every substring that starts at '[' and ends at its matching ']'."""
    for begin, c in enumerate(text):
        if c != "[":
            continue
        depth = 0
        in_string = False
        escaped = False
        for i in range(begin, len(text)):
            ch = text[i]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
            elif ch == '"':
                in_string = True
            elif ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth == 0:
                    yield text[begin:i + 1]
                    break


def parse_model_output(text: str) -> list[AnnotationItem]:
    """
    Extract (time_text, scate) pairs from a model completion.

    The payload is a JSON list of objects; surrounding prose is ignored by
    taking the first balanced bracketed list that decodes as JSON.  Items
    missing either key, or with empty values, are dropped.
    """
    payload = None
    for candidate in _balanced_lists(text):
        try:
            decoded = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(decoded, list):
            payload = decoded
            break
    if payload is None:
        raise UnparseableOutputError("no JSON list found in model output")
    items, dropped = [], 0
    for raw in payload:
        time_text = raw.get("time_text") if isinstance(raw, dict) else None
        scate = raw.get("scate") if isinstance(raw, dict) else None
        if isinstance(time_text, str) and isinstance(scate, str) and time_text.strip() and scate.strip():
            items.append(AnnotationItem(time_text, scate))
        else:
            dropped += 1
    if dropped:
        log.warning("dropped %d malformed item(s) from model output", dropped)
    return items


# ---------------------------------------------------------------------------
# execution

def normalize_item(item: AnnotationItem) -> NormalizedItem:
    """Execute one item's expression, capturing any failure as an error entry."""
    try:
        value = execute(item.scate)
    except ScateError as e:
        return NormalizedItem(item.time_text, item.scate, error={"category": e.category, "message": e.message})
    return NormalizedItem(item.time_text, item.scate, value=serialize_value(value))


def normalize_records(records: Iterable[AnnotationRecord]) -> list[NormalizedRecord]:
    return [NormalizedRecord(r.id, r.sentence, tuple(normalize_item(i) for i in r.items), r.dct)
            for r in records]
