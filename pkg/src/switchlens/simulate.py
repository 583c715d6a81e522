"""Seeded synthetic task logs, for tests and demos.

Everything is driven by one :class:`random.Random`, so a seed pins the
whole log: persons, descriptors, each task's walk through the interruption
machine, and the cue visits logged on resumptions.  Generated event
sequences are valid by construction and replay cleanly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .cue_mining import DEFAULT_CUE_ORDER
from .logfmt import CueVisitRecord, PersonRecord, Record, serialize
from .task_model import (
    EventKind,
    Granularity,
    Initiator,
    ProgressStatus,
    TaskDescriptor,
    TaskEvent,
    TaskType,
)

_PROJECTS = ("atlas", "beacon", "cinder", "dune")
_ROLES = ("analyst", "developer", "architect", "tester")
_EPOCH = datetime(2026, 3, 2, 6, 0, tzinfo=timezone.utc)


@dataclass
class SimulatedLog:
    records: list[Record]

    @property
    def events(self) -> list[TaskEvent]:
        return [r for r in self.records if isinstance(r, TaskEvent)]

    def lines(self) -> list[str]:
        return [serialize(r) for r in self.records]


def _advance(rng: random.Random, at: datetime, lo: float, hi: float) -> datetime:
    return at + timedelta(seconds=rng.uniform(lo, hi))


def random_task_events(
    rng: random.Random,
    task_id: str,
    performer_id: str,
    start: datetime,
    requesters: tuple[str, ...] = ("ext1",),
    interrupting_pool: tuple[str, ...] = (),
    max_episodes: int = 3,
    max_depth: int = 3,
) -> list[TaskEvent]:
    """One task's valid event sequence, from Started to a random end.

    The walk may finish Completed, stay Active, or strand the task
    suspended, waiting to resume, or Abandoned.
    """
    events = [TaskEvent(task_id, start, EventKind.STARTED, performer_id)]
    at = start

    for _ in range(rng.randint(0, max_episodes)):
        initiator = rng.choice((Initiator.SELF, Initiator.EXTERNAL))
        at = _advance(rng, at, 60, 3600)
        events.append(
            TaskEvent(
                task_id,
                at,
                EventKind.SWITCH_REQUESTED,
                performer_id,
                initiator=initiator,
                requester_id=rng.choice(requesters) if initiator is Initiator.EXTERNAL else None,
                interrupting_task_id=(
                    rng.choice(interrupting_pool)
                    if interrupting_pool and rng.random() < 0.8
                    else None
                ),
                annotations=rng.choice((None, "stuck #blockage", "restless #boredom", "note")),
            )
        )
        at = _advance(rng, at, 1, 120)
        events.append(TaskEvent(task_id, at, EventKind.SUSPENDED, performer_id))
        depth = 1

        while depth > 0:
            deepen = depth < max_depth and rng.random() < 0.25
            if deepen:
                if rng.random() < 0.5:
                    # Alert while suspended: recorded, phase holds.
                    at = _advance(rng, at, 30, 600)
                    initiator = rng.choice((Initiator.SELF, Initiator.EXTERNAL))
                    events.append(
                        TaskEvent(
                            task_id,
                            at,
                            EventKind.SWITCH_REQUESTED,
                            performer_id,
                            initiator=initiator,
                            requester_id=(
                                rng.choice(requesters)
                                if initiator is Initiator.EXTERNAL
                                else None
                            ),
                        )
                    )
                at = _advance(rng, at, 30, 600)
                events.append(TaskEvent(task_id, at, EventKind.SUSPENDED, performer_id))
                depth += 1
            else:
                at = _advance(rng, at, 60, 1800)
                events.append(TaskEvent(task_id, at, EventKind.INTERRUPTION_ENDED, performer_id))
                depth -= 1

        roll = rng.random()
        if roll < 0.04:
            at = _advance(rng, at, 60, 600)
            events.append(TaskEvent(task_id, at, EventKind.ABANDONED, performer_id))
            return events
        if roll < 0.08:
            return events  # stranded waiting to resume
        at = _advance(rng, at, 10, 900)
        events.append(TaskEvent(task_id, at, EventKind.RESUMED, performer_id))

    if rng.random() < 0.85:
        at = _advance(rng, at, 300, 7200)
        events.append(TaskEvent(task_id, at, EventKind.COMPLETED, performer_id))
    return events


def _cue_visits(
    rng: random.Random,
    task_id: str,
    resume_at: datetime,
    episode: int,
) -> list[CueVisitRecord]:
    session_id = f"{task_id}#resume{episode}"
    count = rng.randint(1, 5)
    # Earlier cues in the default order are consulted more readily.
    weights = [5, 4, 3, 2, 1]
    at = resume_at
    visits = []
    for _ in range(count):
        cue = rng.choices(DEFAULT_CUE_ORDER, weights=weights)[0]
        visits.append(CueVisitRecord(session_id, task_id, cue, at))
        at = _advance(rng, at, 2, 30)
    return visits


def generate_log(
    seed: int,
    n_persons: int = 6,
    n_tasks: int = 40,
    min_events: int | None = None,
    with_cues: bool = True,
) -> SimulatedLog:
    """A full synthetic log: persons, descriptors, events, cue visits.

    With ``min_events``, tasks keep being added until at least that many
    event records exist.
    """
    rng = random.Random(seed)
    records: list[Record] = []

    person_ids = tuple(f"p{i}" for i in range(1, n_persons + 1))
    for person_id in person_ids:
        records.append(
            PersonRecord(
                person_id,
                name=f"Person {person_id[1:]}",
                role=rng.choice(_ROLES),
                projects=(rng.choice(_PROJECTS),),
            )
        )

    descriptors: list[TaskDescriptor] = []
    event_count = 0
    task_no = 0
    while task_no < n_tasks or (min_events is not None and event_count < min_events):
        task_no += 1
        task_id = f"t{task_no}"
        descriptor = TaskDescriptor(
            task_id=task_id,
            project=rng.choice(_PROJECTS),
            task_type=rng.choice(tuple(TaskType)),
            granularity=rng.choice(tuple(Granularity)),
            priority=rng.randint(1, 5),
            progress_status=rng.choice(tuple(ProgressStatus)),
            performer_id=rng.choice(person_ids),
            performer_experience=round(rng.uniform(0, 20), 1),
        )
        descriptors.append(descriptor)
        records.append(descriptor)

        start = _EPOCH + timedelta(
            days=rng.randint(0, 20), seconds=rng.uniform(0, 12 * 3600)
        )
        pool = tuple(d.task_id for d in descriptors[:-1][-10:])
        events = random_task_events(
            rng,
            task_id,
            descriptor.performer_id,
            start,
            requesters=person_ids,
            interrupting_pool=pool,
        )
        records.extend(events)
        event_count += len(events)

        if with_cues:
            episode = 0
            for event in events:
                if event.kind is EventKind.RESUMED:
                    episode += 1
                    if rng.random() < 0.7:
                        records.extend(_cue_visits(rng, task_id, event.at, episode))

    return SimulatedLog(records=records)
