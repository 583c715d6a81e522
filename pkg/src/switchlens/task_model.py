"""Event-sourced model of one task's execution.

A task moves through a small state machine: it is created, becomes active,
may be alerted about a switch, gets suspended (possibly with nested
interruptions stacking on top), waits to be resumed, and finally completes --
or is abandoned and trapped.  Replaying a task's event log through this
machine is deterministic, and the replayed trace is what every disruptiveness
measure is derived from.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone


class TaskModelError(Exception):
    """Base class for task replay failures.

    ``event_index`` is filled in by :func:`replay` so callers can point at
    the offending record in a log.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.event_index: int | None = None


class IllegalTransition(TaskModelError):
    pass


class NonMonotonicTimestamp(TaskModelError):
    pass


class TerminalState(TaskModelError):
    pass


class IncompleteTrace(TaskModelError):
    pass


class TaskType(enum.Enum):
    GATHERING = "gathering"
    ANALYSIS = "analysis"
    MODELING = "modeling"
    SPECIFICATION = "specification"
    VALIDATION = "validation"
    EVOLUTION = "evolution"
    OTHER = "other"


class Granularity(enum.Enum):
    COARSE = "coarse"
    FINE = "fine"


class ProgressStatus(enum.Enum):
    NOT_STARTED = "not_started"
    EARLY = "early"
    MID = "mid"
    LATE = "late"


class Initiator(enum.Enum):
    SELF = "self"
    EXTERNAL = "external"


class EventKind(enum.Enum):
    STARTED = "Started"
    SWITCH_REQUESTED = "SwitchRequested"
    SUSPENDED = "Suspended"
    INTERRUPTION_ENDED = "InterruptionEnded"
    RESUMED = "Resumed"
    COMPLETED = "Completed"
    ABANDONED = "Abandoned"


class Phase(enum.Enum):
    CREATED = "Created"
    ACTIVE = "Active"
    INTERRUPTION_PENDING = "InterruptionPending"
    SUSPENDED = "Suspended"
    RESUMPTION_PENDING = "ResumptionPending"
    COMPLETED = "Completed"
    TRAPPED = "Trapped"


TERMINAL_PHASES = frozenset({Phase.COMPLETED, Phase.TRAPPED})


def quantize_ms(at: datetime) -> datetime:
    """Normalize a timestamp to UTC at millisecond precision.

    Naive datetimes are rejected: every event in a log carries a zone.
    """
    if at.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    at = at.astimezone(timezone.utc)
    return at.replace(microsecond=(at.microsecond // 1000) * 1000)


@dataclass(frozen=True, slots=True)
class TaskDescriptor:
    task_id: str
    project: str
    task_type: TaskType
    granularity: Granularity
    priority: int
    progress_status: ProgressStatus
    performer_id: str
    performer_experience: float

    def __post_init__(self):
        if not self.task_id:
            raise ValueError("task_id must be non-empty")
        if not 1 <= self.priority <= 5:
            raise ValueError(f"priority must be in 1..5, got {self.priority}")
        if self.performer_experience < 0:
            raise ValueError("performer_experience must be non-negative")


@dataclass(frozen=True, slots=True)
class TaskEvent:
    task_id: str
    at: datetime
    kind: EventKind
    performer_id: str
    initiator: Initiator | None = None
    interrupting_task_id: str | None = None
    requester_id: str | None = None
    annotations: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "at", quantize_ms(self.at))
        if (self.initiator is not None) != (self.kind is EventKind.SWITCH_REQUESTED):
            raise ValueError("initiator is required on SwitchRequested and forbidden elsewhere")
        if self.interrupting_task_id is not None and self.kind not in (
            EventKind.SWITCH_REQUESTED,
            EventKind.SUSPENDED,
        ):
            raise ValueError("interrupting_task_id only allowed on SwitchRequested/Suspended")
        external = self.kind is EventKind.SWITCH_REQUESTED and self.initiator is Initiator.EXTERNAL
        if external and not self.requester_id:
            raise ValueError("requester_id is required on externally initiated SwitchRequested")
        if not external and self.requester_id is not None:
            raise ValueError("requester_id only allowed on externally initiated SwitchRequested")


@dataclass(frozen=True, slots=True)
class TaskState:
    """Snapshot of a task between events.

    ``fragment_index`` counts work fragments so far (0 before the task
    starts).  ``depth`` is the current nesting level of interruptions and is
    positive exactly while suspended.  ``suspended_at`` is when the current
    top-level suspension began; it is kept through the resumption wait so
    trap detection can measure the whole time away from the task.
    """

    phase: Phase
    fragment_index: int = 0
    depth: int = 0
    at: datetime | None = None
    alert_at: datetime | None = None
    suspended_at: datetime | None = None
    interruption_ended_at: datetime | None = None

    def __post_init__(self):
        if self.phase is Phase.CREATED:
            if self.fragment_index != 0:
                raise ValueError("a task that never started has no fragments")
        elif self.fragment_index < 1:
            raise ValueError("fragment_index must be >= 1 once started")
        if (self.depth >= 1) != (self.phase is Phase.SUSPENDED):
            raise ValueError("depth must be >= 1 exactly while suspended")

    @property
    def terminal(self) -> bool:
        return self.phase in TERMINAL_PHASES


INITIAL_STATE = TaskState(phase=Phase.CREATED)


def apply_event(state: TaskState, event: TaskEvent) -> TaskState:
    """Advance ``state`` by one event, or raise.

    Raises :class:`TerminalState` once the task completed or got trapped,
    :class:`NonMonotonicTimestamp` unless the event is strictly later than
    the one that produced ``state``, and :class:`IllegalTransition` for any
    (phase, kind) pair outside the transition table.
    """
    if state.terminal:
        raise TerminalState(f"task is {state.phase.value}; no further events accepted")
    if state.at is not None and event.at <= state.at:
        raise NonMonotonicTimestamp(
            f"event at {event.at.isoformat()} not after {state.at.isoformat()}"
        )

    phase, kind = state.phase, event.kind

    if phase is Phase.CREATED and kind is EventKind.STARTED:
        return TaskState(phase=Phase.ACTIVE, fragment_index=1, at=event.at)

    if phase is Phase.ACTIVE and kind is EventKind.SWITCH_REQUESTED:
        return replace(state, phase=Phase.INTERRUPTION_PENDING, at=event.at, alert_at=event.at)

    if phase is Phase.ACTIVE and kind is EventKind.COMPLETED:
        return replace(state, phase=Phase.COMPLETED, at=event.at)

    if phase is Phase.INTERRUPTION_PENDING and kind is EventKind.SUSPENDED:
        return replace(
            state,
            phase=Phase.SUSPENDED,
            depth=1,
            at=event.at,
            suspended_at=event.at,
        )

    if phase is Phase.SUSPENDED and kind is EventKind.SWITCH_REQUESTED:
        # An alert while already suspended; recorded but the phase holds.
        return replace(state, at=event.at, alert_at=event.at)

    if phase is Phase.SUSPENDED and kind is EventKind.SUSPENDED:
        return replace(state, depth=state.depth + 1, at=event.at)

    if phase is Phase.SUSPENDED and kind is EventKind.INTERRUPTION_ENDED:
        if state.depth > 1:
            return replace(state, depth=state.depth - 1, at=event.at)
        return replace(
            state,
            phase=Phase.RESUMPTION_PENDING,
            depth=0,
            at=event.at,
            interruption_ended_at=event.at,
        )

    if phase is Phase.RESUMPTION_PENDING and kind is EventKind.RESUMED:
        return TaskState(
            phase=Phase.ACTIVE,
            fragment_index=state.fragment_index + 1,
            at=event.at,
        )

    if phase in (Phase.SUSPENDED, Phase.RESUMPTION_PENDING) and kind is EventKind.ABANDONED:
        return replace(state, phase=Phase.TRAPPED, depth=0, at=event.at)

    raise IllegalTransition(f"{kind.value} is not valid while {phase.value}")


@dataclass(frozen=True, slots=True)
class TraceStep:
    event: TaskEvent
    state: TaskState


@dataclass(frozen=True, slots=True)
class TaskTrace:
    """Full replay of one task: every event with the state it produced."""

    descriptor: TaskDescriptor
    steps: tuple[TraceStep, ...] = ()

    @property
    def final_state(self) -> TaskState:
        return self.steps[-1].state if self.steps else INITIAL_STATE

    @property
    def events(self) -> tuple[TaskEvent, ...]:
        return tuple(step.event for step in self.steps)


def replay(descriptor: TaskDescriptor, events: list[TaskEvent] | tuple[TaskEvent, ...]) -> TaskTrace:
    """Fold a task's event log into a :class:`TaskTrace`.

    Events must be ordered by timestamp and belong to the descriptor's task.
    Replay failures carry the index of the offending event.
    """
    state = INITIAL_STATE
    steps: list[TraceStep] = []
    for index, event in enumerate(events):
        if event.task_id != descriptor.task_id:
            raise ValueError(
                f"event {index} belongs to task {event.task_id!r}, "
                f"not {descriptor.task_id!r}"
            )
        try:
            state = apply_event(state, event)
        except TaskModelError as err:
            err.event_index = index
            raise
        steps.append(TraceStep(event=event, state=state))
    return TaskTrace(descriptor=descriptor, steps=tuple(steps))


@dataclass(frozen=True, slots=True)
class DisruptivenessMeasures:
    """Disruptiveness of a task's interruptions, derived from its trace.

    ``fragments`` counts contiguous stretches of work on the task.  Each
    interruption lag is the wait between the switch alert and the actual
    suspension; each resumption lag is the wait between the interruption
    ending and work actually resuming.  ``suspension_durations`` covers the
    whole suspended stretch per closed episode, so the total time away from
    the task is also computable.
    """

    fragments: int
    resumption_lags: tuple[float, ...] = ()
    interruption_lags: tuple[float, ...] = ()
    nested_depth_max: int = 0
    suspension_durations: tuple[float, ...] = ()

    def __post_init__(self):
        if self.fragments < 0:
            raise ValueError("fragments must be non-negative")
        for lag in (*self.resumption_lags, *self.interruption_lags, *self.suspension_durations):
            if lag < 0:
                raise ValueError("lags must be non-negative")

    @property
    def total_suspension_seconds(self) -> float:
        return sum(self.suspension_durations)


def _seconds(later: datetime, earlier: datetime) -> float:
    return (later - earlier).total_seconds()


def derive_measures(trace: TaskTrace, require_closed: bool = False) -> DisruptivenessMeasures:
    """Derive the disruptiveness measures from a replayed trace.

    Open lags (an alert not yet suspended, or an ended interruption not yet
    resumed) are simply absent from the lists, which suits live monitoring;
    pass ``require_closed=True`` to get :class:`IncompleteTrace` instead.
    """
    fragments = 0
    resumption_lags: list[float] = []
    interruption_lags: list[float] = []
    suspension_durations: list[float] = []
    depth_max = 0

    prev = INITIAL_STATE
    pending_alert: datetime | None = None
    episode_start: datetime | None = None
    pending_end: datetime | None = None

    for step in trace.steps:
        event, state = step.event, step.state
        if state.phase is Phase.ACTIVE and prev.phase in (Phase.CREATED, Phase.RESUMPTION_PENDING):
            fragments += 1
        if prev.phase is Phase.ACTIVE and event.kind is EventKind.SWITCH_REQUESTED:
            pending_alert = event.at
        if prev.phase is Phase.INTERRUPTION_PENDING and event.kind is EventKind.SUSPENDED:
            assert pending_alert is not None
            interruption_lags.append(_seconds(event.at, pending_alert))
            episode_start = event.at
        if prev.phase is Phase.SUSPENDED and state.phase is Phase.RESUMPTION_PENDING:
            pending_end = event.at
        if prev.phase is Phase.RESUMPTION_PENDING and event.kind is EventKind.RESUMED:
            assert pending_end is not None and episode_start is not None
            resumption_lags.append(_seconds(event.at, pending_end))
            suspension_durations.append(_seconds(event.at, episode_start))
        depth_max = max(depth_max, state.depth)
        prev = state

    if require_closed and trace.final_state.phase in (
        Phase.INTERRUPTION_PENDING,
        Phase.RESUMPTION_PENDING,
    ):
        raise IncompleteTrace(
            f"trace still {trace.final_state.phase.value}; open lag not yet measurable"
        )

    return DisruptivenessMeasures(
        fragments=fragments,
        resumption_lags=tuple(resumption_lags),
        interruption_lags=tuple(interruption_lags),
        nested_depth_max=depth_max,
        suspension_durations=tuple(suspension_durations),
    )


def detect_trap(trace: TaskTrace, now: datetime, horizon: timedelta) -> bool:
    """Has this task fallen into the trap of never being resumed?

    True for explicit abandonment, or for a task suspended (or waiting to
    resume) for strictly longer than ``horizon``.
    """
    if horizon <= timedelta(0):
        raise ValueError("horizon must be positive")
    state = trace.final_state
    if state.phase is Phase.TRAPPED:
        return True
    if state.phase in (Phase.SUSPENDED, Phase.RESUMPTION_PENDING):
        assert state.suspended_at is not None
        return quantize_ms(now) - state.suspended_at > horizon
    return False
