"""External log format: line-delimited JSON records.

One UTF-8 JSON object per line.  The ``record`` field names the kind:

``descriptor``
    task_id, project, task_type, granularity, priority, progress_status,
    performer_id, performer_experience
``event``
    task_id, at, kind, performer_id, plus the optional event fields
    (initiator, interrupting_task_id, requester_id, annotations)
``cue_visit``
    session_id, task_id, cue, at -- one consulted cue during a resumption
``person``
    person_id with an optional profile card (name, role, projects)

Timestamps are ISO-8601 UTC with millisecond precision
(``2026-03-02T09:15:00.000Z``); offsets other than Z are accepted on input
and normalized.  :func:`serialize` emits a canonical form (sorted keys, no
spaces, optional fields omitted when absent) so that parse-then-serialize
is a fixed point and exports reproduce accepted records byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Union

from .cue_mining import CueType
from .task_model import (
    EventKind,
    Granularity,
    Initiator,
    ProgressStatus,
    TaskDescriptor,
    TaskEvent,
    TaskType,
    quantize_ms,
)


class MalformedLine(ValueError):
    """A line that does not parse as a well-formed log record."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True, slots=True)
class CueVisitRecord:
    """One cue consulted while resuming a task, as logged."""

    session_id: str
    task_id: str
    cue: CueType
    at: datetime

    def __post_init__(self):
        if not self.session_id:
            raise ValueError("session_id must be non-empty")
        if not self.task_id:
            raise ValueError("task_id must be non-empty")
        object.__setattr__(self, "at", quantize_ms(self.at))


@dataclass(frozen=True, slots=True)
class PersonRecord:
    """A declared person, with an optional profile card."""

    person_id: str
    name: str | None = None
    role: str | None = None
    projects: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.person_id:
            raise ValueError("person_id must be non-empty")
        object.__setattr__(self, "projects", tuple(self.projects))


Record = Union[TaskDescriptor, TaskEvent, CueVisitRecord, PersonRecord]


def format_timestamp(at: datetime) -> str:
    at = quantize_ms(at)
    return at.strftime("%Y-%m-%dT%H:%M:%S.") + f"{at.microsecond // 1000:03d}Z"


def parse_timestamp(text: str) -> datetime:
    if not isinstance(text, str):
        raise MalformedLine(f"timestamp must be a string, got {type(text).__name__}")
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        at = datetime.fromisoformat(text)
    except ValueError as err:
        raise MalformedLine(f"bad timestamp: {err}") from None
    if at.tzinfo is None:
        raise MalformedLine(f"timestamp {text!r} has no UTC offset")
    return at.astimezone(timezone.utc)


def _require(obj: dict, field: str, kind) -> object:
    try:
        value = obj[field]
    except KeyError:
        raise MalformedLine(f"missing field {field!r}") from None
    wanted = kind if isinstance(kind, tuple) else (kind,)
    if not isinstance(value, wanted) or (int in wanted and isinstance(value, bool)):
        names = "/".join(k.__name__ for k in wanted)
        raise MalformedLine(f"field {field!r} must be {names}, got {type(value).__name__}")
    return value


def _optional_str(obj: dict, field: str) -> str | None:
    value = obj.get(field)
    if value is not None and not isinstance(value, str):
        raise MalformedLine(f"field {field!r} must be a string if present")
    return value


def _enum(obj: dict, field: str, enum_cls):
    raw = _require(obj, field, str)
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        raise MalformedLine(f"field {field!r} must be one of: {allowed}") from None


_KNOWN_FIELDS = {
    "descriptor": {
        "record", "task_id", "project", "task_type", "granularity",
        "priority", "progress_status", "performer_id", "performer_experience",
    },
    "event": {
        "record", "task_id", "at", "kind", "performer_id",
        "initiator", "interrupting_task_id", "requester_id", "annotations",
    },
    "cue_visit": {"record", "session_id", "task_id", "cue", "at"},
    "person": {"record", "person_id", "name", "role", "projects"},
}


def parse_line(line: str) -> Record:
    """Parse one log line, raising :class:`MalformedLine` on any defect."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as err:
        raise MalformedLine(f"not valid JSON: {err.msg}") from None
    if not isinstance(obj, dict):
        raise MalformedLine("line must be a JSON object")

    kind = obj.get("record")
    if kind not in _KNOWN_FIELDS:
        raise MalformedLine(f"unknown record kind {kind!r}")
    extras = sorted(set(obj) - _KNOWN_FIELDS[kind])
    if extras:
        raise MalformedLine(f"unexpected fields: {', '.join(extras)}")

    try:
        if kind == "descriptor":
            experience = _require(obj, "performer_experience", (int, float))
            return TaskDescriptor(
                task_id=_require(obj, "task_id", str),
                project=_require(obj, "project", str),
                task_type=_enum(obj, "task_type", TaskType),
                granularity=_enum(obj, "granularity", Granularity),
                priority=_require(obj, "priority", int),
                progress_status=_enum(obj, "progress_status", ProgressStatus),
                performer_id=_require(obj, "performer_id", str),
                performer_experience=float(experience),
            )
        if kind == "event":
            initiator = None
            if obj.get("initiator") is not None:
                initiator = _enum(obj, "initiator", Initiator)
            return TaskEvent(
                task_id=_require(obj, "task_id", str),
                at=parse_timestamp(_require(obj, "at", str)),
                kind=_enum(obj, "kind", EventKind),
                performer_id=_require(obj, "performer_id", str),
                initiator=initiator,
                interrupting_task_id=_optional_str(obj, "interrupting_task_id"),
                requester_id=_optional_str(obj, "requester_id"),
                annotations=_optional_str(obj, "annotations"),
            )
        if kind == "cue_visit":
            return CueVisitRecord(
                session_id=_require(obj, "session_id", str),
                task_id=_require(obj, "task_id", str),
                cue=_enum(obj, "cue", CueType),
                at=parse_timestamp(_require(obj, "at", str)),
            )
        projects = obj.get("projects", [])
        if not isinstance(projects, list) or not all(isinstance(p, str) for p in projects):
            raise MalformedLine("field 'projects' must be a list of strings")
        return PersonRecord(
            person_id=_require(obj, "person_id", str),
            name=_optional_str(obj, "name"),
            role=_optional_str(obj, "role"),
            projects=tuple(projects),
        )
    except MalformedLine:
        raise
    except ValueError as err:
        raise MalformedLine(str(err)) from None


def _to_dict(record: Record) -> dict:
    if isinstance(record, TaskDescriptor):
        return {
            "record": "descriptor",
            "task_id": record.task_id,
            "project": record.project,
            "task_type": record.task_type.value,
            "granularity": record.granularity.value,
            "priority": record.priority,
            "progress_status": record.progress_status.value,
            "performer_id": record.performer_id,
            "performer_experience": record.performer_experience,
        }
    if isinstance(record, TaskEvent):
        obj = {
            "record": "event",
            "task_id": record.task_id,
            "at": format_timestamp(record.at),
            "kind": record.kind.value,
            "performer_id": record.performer_id,
        }
        if record.initiator is not None:
            obj["initiator"] = record.initiator.value
        if record.interrupting_task_id is not None:
            obj["interrupting_task_id"] = record.interrupting_task_id
        if record.requester_id is not None:
            obj["requester_id"] = record.requester_id
        if record.annotations is not None:
            obj["annotations"] = record.annotations
        return obj
    if isinstance(record, CueVisitRecord):
        return {
            "record": "cue_visit",
            "session_id": record.session_id,
            "task_id": record.task_id,
            "cue": record.cue.value,
            "at": format_timestamp(record.at),
        }
    if isinstance(record, PersonRecord):
        obj = {"record": "person", "person_id": record.person_id}
        if record.name is not None:
            obj["name"] = record.name
        if record.role is not None:
            obj["role"] = record.role
        if record.projects:
            obj["projects"] = list(record.projects)
        return obj
    raise TypeError(f"not a log record: {type(record).__name__}")


def serialize(record: Record) -> str:
    """Canonical single-line form of a record (no trailing newline)."""
    return json.dumps(_to_dict(record), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def identity_key(record: Record) -> tuple:
    """Dedup key under which ingestion is idempotent."""
    if isinstance(record, TaskDescriptor):
        return ("descriptor", record.task_id)
    if isinstance(record, TaskEvent):
        return ("event", record.task_id, record.at, record.kind)
    if isinstance(record, CueVisitRecord):
        return ("cue_visit", record.session_id, record.at, record.cue)
    if isinstance(record, PersonRecord):
        return ("person", record.person_id)
    raise TypeError(f"not a log record: {type(record).__name__}")
