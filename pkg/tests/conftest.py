"""Shared builders for tests."""

from datetime import datetime, timedelta, timezone

import pytest

from switchlens.task_model import (
    EventKind,
    Granularity,
    Initiator,
    ProgressStatus,
    TaskDescriptor,
    TaskEvent,
    TaskType,
)

BASE = datetime(2026, 3, 2, 9, 0, tzinfo=timezone.utc)


def at(seconds: float) -> datetime:
    return BASE + timedelta(seconds=seconds)


def make_descriptor(
    task_id="t1",
    project="atlas",
    task_type=TaskType.MODELING,
    priority=3,
    performer_id="p1",
    **overrides,
) -> TaskDescriptor:
    fields = dict(
        task_id=task_id,
        project=project,
        task_type=task_type,
        granularity=Granularity.COARSE,
        priority=priority,
        progress_status=ProgressStatus.MID,
        performer_id=performer_id,
        performer_experience=5.0,
    )
    fields.update(overrides)
    return TaskDescriptor(**fields)


def make_event(kind: EventKind, seconds: float, task_id="t1", performer_id="p1", **overrides) -> TaskEvent:
    fields = dict(task_id=task_id, at=at(seconds), kind=kind, performer_id=performer_id)
    if kind is EventKind.SWITCH_REQUESTED and "initiator" not in overrides:
        fields["initiator"] = Initiator.SELF
    fields.update(overrides)
    return TaskEvent(**fields)


def simple_interruption_events(task_id="t1", performer_id="p1"):
    """Started, alerted, suspended, ended, resumed, completed."""
    return [
        make_event(EventKind.STARTED, 0, task_id, performer_id),
        make_event(EventKind.SWITCH_REQUESTED, 300, task_id, performer_id),
        make_event(EventKind.SUSPENDED, 330, task_id, performer_id),
        make_event(EventKind.INTERRUPTION_ENDED, 1800, task_id, performer_id),
        make_event(EventKind.RESUMED, 1860, task_id, performer_id),
        make_event(EventKind.COMPLETED, 3600, task_id, performer_id),
    ]


@pytest.fixture
def descriptor():
    return make_descriptor()
