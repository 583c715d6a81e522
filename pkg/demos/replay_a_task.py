"""
Replaying one task's interruption history
=========================================

A task's life is an append-only stream of events.  Replaying the stream
walks a state machine through its phases and gives us the disruptiveness
measures for free: fragment count, interruption lag, resumption lag.
"""

from datetime import datetime, timedelta, timezone

from switchlens import (
    EventKind,
    Granularity,
    Initiator,
    ProgressStatus,
    TaskDescriptor,
    TaskEvent,
    TaskType,
    derive_measures,
    detect_trap,
    replay,
)

# Every stream starts with a descriptor: who is doing what, and how big it is.
descriptor = TaskDescriptor(
    task_id="atlas-validation-7",
    project="atlas",
    task_type=TaskType.MODELING,
    granularity=Granularity.COARSE,
    priority=2,
    progress_status=ProgressStatus.MID,
    performer_id="dana",
    performer_experience=6.0,
)

t0 = datetime(2026, 3, 2, 9, 0, tzinfo=timezone.utc)


def event(kind, minutes, **extra):
    return TaskEvent(
        task_id=descriptor.task_id,
        at=t0 + timedelta(minutes=minutes),
        kind=kind,
        performer_id=descriptor.performer_id,
        **extra,
    )


# Dana works for twenty minutes, decides to switch away (a self-initiated
# switch), wraps up the current thought, is gone for an hour, and comes back.
events = [
    event(EventKind.STARTED, 0),
    event(EventKind.SWITCH_REQUESTED, 20, initiator=Initiator.SELF),
    event(EventKind.SUSPENDED, 22),          # two minutes to find a stopping point
    event(EventKind.INTERRUPTION_ENDED, 80),
    event(EventKind.RESUMED, 84),            # four minutes to rebuild context
    event(EventKind.COMPLETED, 150),
]

trace = replay(descriptor, events)

# The trace records the state after every event; print the walk.
for step in trace.steps:
    print(f"{step.event.at:%H:%M}  {step.event.kind.value:<18} -> {step.state.phase.value}")

# Measures come straight off the trace.  The interruption lag is the time
# between asking to switch and actually suspending; the resumption lag is
# the time between being free to resume and actually resuming.
measures = derive_measures(trace)
print()
print(f"fragments:          {measures.fragments}")
print(f"interruption lags:  {measures.interruption_lags}")
print(f"resumption lags:    {measures.resumption_lags}")
print(f"suspension spells:  {measures.suspension_durations}")

# A task suspended past a horizon with no resumption in sight is trapped.
# This one completed, so it can never be trapped, however late we look.
much_later = t0 + timedelta(days=30)
print(f"trapped after a month? {detect_trap(trace, much_later, timedelta(days=7))}")
