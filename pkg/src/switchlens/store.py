"""Append-only event store and the views derived from it.

The store accepts records in the external log format, validates them
incrementally (an event must legally advance its task's state machine at
ingest time, so every stored stream replays cleanly), and persists them as
an append-only file of canonical lines.  Everything else -- traces, mining
inputs, cue sessions, the communication graph -- is derived on demand from
the accepted records.

Writes are serialized behind a lock; :meth:`EventStore.snapshot` hands out
an immutable copy, so readers never observe a half-applied batch.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, time
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Mapping
from zoneinfo import ZoneInfo

from .cue_mining import CueSession
from .logfmt import (
    CueVisitRecord,
    MalformedLine,
    PersonRecord,
    Record,
    identity_key,
    parse_line,
    serialize,
)
from .pattern_mining import (
    CharacteristicItem,
    Discretization,
    EmptyInput,
    MiningRecord,
    RawInterruptionRecord,
    discretize,
)
from .task_model import (
    INITIAL_STATE,
    EventKind,
    Initiator,
    Phase,
    TaskDescriptor,
    TaskEvent,
    TaskModelError,
    TaskState,
    TaskTrace,
    TraceStep,
    apply_event,
    derive_measures,
    replay,
)

BLOCKAGE_FLAG = "#blockage"
BOREDOM_FLAG = "#boredom"

MORNING = (time(6), time(12))
AFTERNOON = (time(12), time(18))


class StoreCorruption(ValueError):
    """A persisted store file failed re-validation on open."""


@dataclass(frozen=True, slots=True)
class RejectedRecord:
    line_no: int
    reason: str


@dataclass(frozen=True, slots=True)
class IngestReport:
    accepted: int = 0
    duplicates: int = 0
    rejected: tuple[RejectedRecord, ...] = ()

    @property
    def total(self) -> int:
        return self.accepted + self.duplicates + len(self.rejected)


@dataclass(frozen=True, slots=True)
class CommunicationGraph:
    """Who interrupts whom: directed requester -> performer edge weights."""

    nodes: Mapping[str, PersonRecord | None]
    edges: Mapping[tuple[str, str], int]

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


@dataclass(frozen=True, slots=True)
class StoreSnapshot:
    """Immutable view of the store at one watermark."""

    watermark: int
    descriptors: Mapping[str, TaskDescriptor]
    events: Mapping[str, tuple[TaskEvent, ...]]
    cue_sessions: tuple[CueSession, ...]
    persons: Mapping[str, PersonRecord]


@dataclass(frozen=True, slots=True)
class InterruptionEpisode:
    """One top-level suspension of a task, with its local measures."""

    task_id: str
    alert: TaskEvent
    suspended_at: datetime
    interruption_lag_s: float
    resumption_lag_s: float | None
    interruption_ended_at: datetime | None
    resumed_at: datetime | None


def time_of_day_bucket(at: datetime, tz: ZoneInfo) -> str:
    local = at.astimezone(tz).timetz().replace(tzinfo=None)
    if MORNING[0] <= local < MORNING[1]:
        return "morning"
    if AFTERNOON[0] <= local < AFTERNOON[1]:
        return "afternoon"
    return "evening"


def episodes_of(trace: TaskTrace) -> list[InterruptionEpisode]:
    """Extract each top-level suspension episode from a replayed trace."""
    episodes: list[InterruptionEpisode] = []
    prev = INITIAL_STATE
    alert: TaskEvent | None = None
    opening: TaskEvent | None = None
    suspended_at: datetime | None = None
    ended_at: datetime | None = None
    for step in trace.steps:
        event, state = step.event, step.state
        if event.kind is EventKind.SWITCH_REQUESTED and prev.phase is Phase.ACTIVE:
            alert = event
        elif event.kind is EventKind.SUSPENDED and prev.phase is Phase.INTERRUPTION_PENDING:
            assert alert is not None
            opening, suspended_at, ended_at = alert, event.at, None
        elif event.kind is EventKind.INTERRUPTION_ENDED and state.phase is Phase.RESUMPTION_PENDING:
            ended_at = event.at
        elif event.kind is EventKind.RESUMED and prev.phase is Phase.RESUMPTION_PENDING:
            assert opening is not None and suspended_at is not None and ended_at is not None
            episodes.append(
                InterruptionEpisode(
                    task_id=trace.descriptor.task_id,
                    alert=opening,
                    suspended_at=suspended_at,
                    interruption_lag_s=(suspended_at - opening.at).total_seconds(),
                    resumption_lag_s=(event.at - ended_at).total_seconds(),
                    interruption_ended_at=ended_at,
                    resumed_at=event.at,
                )
            )
            alert = opening = suspended_at = ended_at = None
        prev = state
    if opening is not None and suspended_at is not None:
        # Episode still open (suspended, waiting, or abandoned mid-way).
        episodes.append(
            InterruptionEpisode(
                task_id=trace.descriptor.task_id,
                alert=opening,
                suspended_at=suspended_at,
                interruption_lag_s=(suspended_at - opening.at).total_seconds(),
                resumption_lag_s=None,
                interruption_ended_at=ended_at,
                resumed_at=None,
            )
        )
    return episodes


def _annotation_flag(annotations: str | None, flag: str) -> str:
    return "yes" if annotations is not None and flag in annotations else "no"


def episode_characteristics(
    episode: InterruptionEpisode,
    descriptors: Mapping[str, TaskDescriptor],
    tz: ZoneInfo,
) -> frozenset[CharacteristicItem]:
    """Derive the characteristic items of one episode.

    The interrupting task's project, type, and priority come from its
    descriptor when the alert names one and the store knows it; otherwise
    the corresponding characteristics fall back to ``unknown``.
    """
    alert = episode.alert
    primary = descriptors[episode.task_id]
    assert alert.initiator is not None
    items = {
        CharacteristicItem("initiator", alert.initiator.value),
        CharacteristicItem("time_of_day", time_of_day_bucket(alert.at, tz)),
        CharacteristicItem("blockage", _annotation_flag(alert.annotations, BLOCKAGE_FLAG)),
        CharacteristicItem("boredom", _annotation_flag(alert.annotations, BOREDOM_FLAG)),
    }
    interrupting = descriptors.get(alert.interrupting_task_id or "")
    if interrupting is None:
        items |= {
            CharacteristicItem("context_switch", "unknown"),
            CharacteristicItem("interrupting_type", "unknown"),
            CharacteristicItem("priority_relation", "unknown"),
        }
    else:
        same = interrupting.project == primary.project
        items.add(CharacteristicItem("context_switch", "same_project" if same else "different_project"))
        items.add(CharacteristicItem("interrupting_type", interrupting.task_type.value))
        # Priority 1 is the most urgent, so a smaller number outranks.
        if interrupting.priority < primary.priority:
            relation = "higher"
        elif interrupting.priority == primary.priority:
            relation = "same"
        else:
            relation = "lower"
        items.add(CharacteristicItem("priority_relation", relation))
    return frozenset(items)


class EventStore:
    """Validated task-log store; in-memory, or persisted at ``path``."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._descriptors: dict[str, TaskDescriptor] = {}
        self._events: dict[str, list[TaskEvent]] = {}
        self._states: dict[str, TaskState] = {}
        self._cue_visits: dict[str, list[CueVisitRecord]] = {}
        self._session_task: dict[str, str] = {}
        self._persons: dict[str, PersonRecord] = {}
        self._seen: set[tuple] = set()
        self._order: list[Record] = []
        self._watermark = 0
        if self._path is not None and self._path.exists():
            self._load()

    def _load(self):
        with self._path.open(encoding="utf-8") as fh:
            report = self._ingest_lines(fh, persist=False)
        if report.rejected or report.duplicates:
            first = report.rejected[0] if report.rejected else None
            detail = f"line {first.line_no}: {first.reason}" if first else "duplicate records"
            raise StoreCorruption(f"{self._path}: {detail}")

    # -- ingestion ---------------------------------------------------------

    def ingest(self, lines: Iterable[str]) -> IngestReport:
        """Ingest log lines; malformed or invalid lines are reported, not fatal."""
        with self._lock:
            return self._ingest_lines(lines, persist=True)

    def ingest_records(self, records: Iterable[Record]) -> IngestReport:
        """Ingest already-parsed records (line numbers count from 1)."""
        with self._lock:
            accepted = duplicates = 0
            rejected: list[RejectedRecord] = []
            appended: list[Record] = []
            for line_no, record in enumerate(records, start=1):
                outcome = self._admit(record)
                if outcome is None:
                    accepted += 1
                    appended.append(record)
                elif outcome == "duplicate":
                    duplicates += 1
                else:
                    rejected.append(RejectedRecord(line_no=line_no, reason=outcome))
            self._persist(appended)
            return IngestReport(accepted=accepted, duplicates=duplicates, rejected=tuple(rejected))

    def _ingest_lines(self, lines: Iterable[str], persist: bool) -> IngestReport:
        accepted = duplicates = 0
        rejected: list[RejectedRecord] = []
        appended: list[Record] = []
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = parse_line(line)
            except MalformedLine as err:
                rejected.append(RejectedRecord(line_no=line_no, reason=err.reason))
                continue
            outcome = self._admit(record)
            if outcome is None:
                accepted += 1
                appended.append(record)
            elif outcome == "duplicate":
                duplicates += 1
            else:
                rejected.append(RejectedRecord(line_no=line_no, reason=outcome))
        if persist:
            self._persist(appended)
        return IngestReport(accepted=accepted, duplicates=duplicates, rejected=tuple(rejected))

    def _persist(self, records: list[Record]):
        if self._path is None or not records:
            return
        with self._path.open("a", encoding="utf-8") as fh:
            for record in records:
                fh.write(serialize(record) + "\n")

    def _admit(self, record: Record) -> str | None:
        """Apply one record; None on acceptance, else 'duplicate' or a reason."""
        key = identity_key(record)
        # Descriptors and persons are keyed by id alone, so a redeclaration
        # is only a duplicate when the payload matches; those branches decide
        # for themselves.  Events and cue visits dedup purely on identity.
        if key in self._seen and not isinstance(record, (TaskDescriptor, PersonRecord)):
            return "duplicate"

        if isinstance(record, TaskDescriptor):
            existing = self._descriptors.get(record.task_id)
            if existing is not None:
                if existing == record:
                    return "duplicate"
                return f"ConflictingDescriptor: task {record.task_id!r} already declared differently"
            self._descriptors[record.task_id] = record
        elif isinstance(record, TaskEvent):
            if record.task_id not in self._descriptors:
                return f"UnknownTask: no descriptor for task {record.task_id!r}"
            state = self._states.get(record.task_id, INITIAL_STATE)
            try:
                next_state = apply_event(state, record)
            except TaskModelError as err:
                return f"{type(err).__name__}: {err}"
            self._states[record.task_id] = next_state
            self._events.setdefault(record.task_id, []).append(record)
        elif isinstance(record, CueVisitRecord):
            if record.task_id not in self._descriptors:
                return f"UnknownTask: no descriptor for task {record.task_id!r}"
            owner = self._session_task.get(record.session_id)
            if owner is not None and owner != record.task_id:
                return (
                    f"SessionTaskMismatch: session {record.session_id!r} "
                    f"belongs to task {owner!r}"
                )
            visits = self._cue_visits.get(record.session_id, [])
            if visits and record.at < visits[-1].at:
                return (
                    f"NonMonotonicTimestamp: visit at {record.at.isoformat()} "
                    f"before the session's latest visit"
                )
            self._session_task[record.session_id] = record.task_id
            self._cue_visits.setdefault(record.session_id, []).append(record)
        elif isinstance(record, PersonRecord):
            existing = self._persons.get(record.person_id)
            if existing is not None:
                if existing == record:
                    return "duplicate"
                return f"ConflictingPerson: person {record.person_id!r} already declared differently"
            self._persons[record.person_id] = record
        else:
            return f"unsupported record type {type(record).__name__}"

        self._seen.add(key)
        self._order.append(record)
        self._watermark += 1
        return None

    # -- views -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._order)

    @property
    def watermark(self) -> int:
        return self._watermark

    def export(self) -> Iterator[str]:
        """Accepted records as canonical lines, in ingestion order."""
        with self._lock:
            order = list(self._order)
        for record in order:
            yield serialize(record)

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            descriptors = dict(self._descriptors)
            events = {task_id: tuple(evs) for task_id, evs in self._events.items()}
            persons = dict(self._persons)
            sessions = tuple(
                self._build_session(session_id, visits, descriptors)
                for session_id, visits in self._cue_visits.items()
            )
            return StoreSnapshot(
                watermark=self._watermark,
                descriptors=descriptors,
                events=events,
                cue_sessions=sessions,
                persons=persons,
            )

    @staticmethod
    def _build_session(
        session_id: str,
        visits: list[CueVisitRecord],
        descriptors: Mapping[str, TaskDescriptor],
    ) -> CueSession:
        task_id = visits[0].task_id
        return CueSession.from_cues(
            session_id,
            task_id,
            descriptors[task_id].task_type,
            [(v.cue, v.at) for v in visits],
        )

    def descriptor(self, task_id: str) -> TaskDescriptor | None:
        with self._lock:
            return self._descriptors.get(task_id)

    def trace(self, task_id: str) -> TaskTrace:
        """Replay one task's stored stream (guaranteed valid by ingestion)."""
        with self._lock:
            descriptor = self._descriptors.get(task_id)
            if descriptor is None:
                raise KeyError(task_id)
            events = tuple(self._events.get(task_id, []))
        return replay(descriptor, events)

    def task_ids(self) -> list[str]:
        with self._lock:
            return list(self._descriptors)

    def raw_interruption_records(
        self,
        task_type,
        tz: ZoneInfo,
    ) -> list[RawInterruptionRecord]:
        return snapshot_raw_records(self.snapshot(), task_type, tz)

    def mining_records(
        self,
        task_type,
        discretization: Discretization | None = None,
        tz: ZoneInfo | None = None,
    ) -> list[MiningRecord]:
        """Discretized mining input, one record per interruption episode."""
        tz = tz or ZoneInfo("UTC")
        raw = self.raw_interruption_records(task_type, tz)
        if not raw:
            return []
        return discretize(raw, discretization)

    def cue_sessions(self, task_type=None) -> list[CueSession]:
        sessions = self.snapshot().cue_sessions
        if task_type is None:
            return list(sessions)
        return [s for s in sessions if s.task_type is task_type]

    def communication_graph(
        self,
        start: datetime | None = None,
        end: datetime | None = None,
    ) -> CommunicationGraph:
        return snapshot_graph(self.snapshot(), start, end)


def snapshot_raw_records(
    snapshot: StoreSnapshot,
    task_type,
    tz: ZoneInfo,
) -> list[RawInterruptionRecord]:
    """One raw record per top-level interruption episode of the type.

    Episode-scoped measures (both lags) come from that episode; the
    fragment count is the whole task's, attached to each of its episodes.
    """
    if snapshot.watermark == 0:
        raise EmptyInput("store is empty")
    records: list[RawInterruptionRecord] = []
    for task_id, descriptor in snapshot.descriptors.items():
        if descriptor.task_type is not task_type:
            continue
        trace = replay(descriptor, snapshot.events.get(task_id, ()))
        if not trace.steps:
            continue
        fragments = derive_measures(trace).fragments
        for episode in episodes_of(trace):
            records.append(
                RawInterruptionRecord(
                    task_type=descriptor.task_type,
                    characteristics=episode_characteristics(
                        episode, snapshot.descriptors, tz
                    ),
                    fragments=fragments,
                    resumption_lag_s=episode.resumption_lag_s,
                    interruption_lag_s=episode.interruption_lag_s,
                )
            )
    return records


def snapshot_mining_records(
    snapshot: StoreSnapshot,
    task_type,
    discretization: Discretization | None = None,
    tz: ZoneInfo | None = None,
) -> list[MiningRecord]:
    raw = snapshot_raw_records(snapshot, task_type, tz or ZoneInfo("UTC"))
    if not raw:
        return []
    return discretize(raw, discretization)


def snapshot_graph(
    snapshot: StoreSnapshot,
    start: datetime | None = None,
    end: datetime | None = None,
) -> CommunicationGraph:
    """Directed switch-request counts between people in [start, end).

    Every SwitchRequested in range contributes one edge unit: external
    requests from requester to the event's performer, self-initiated
    switches as a self-loop on the performer.  Declared persons appear as
    nodes even when isolated.
    """
    edges: dict[tuple[str, str], int] = {}
    for events in snapshot.events.values():
        for event in events:
            if event.kind is not EventKind.SWITCH_REQUESTED:
                continue
            if start is not None and event.at < start:
                continue
            if end is not None and event.at >= end:
                continue
            if event.initiator is Initiator.EXTERNAL:
                edge = (event.requester_id, event.performer_id)
            else:
                edge = (event.performer_id, event.performer_id)
            edges[edge] = edges.get(edge, 0) + 1
    nodes: dict[str, PersonRecord | None] = dict(snapshot.persons)
    for requester, performer in edges:
        nodes.setdefault(requester, None)
        nodes.setdefault(performer, None)
    return CommunicationGraph(nodes=nodes, edges=edges)
