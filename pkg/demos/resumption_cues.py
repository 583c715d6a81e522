"""
How developers find their way back
==================================

When a suspended task is picked up again, people walk through cues:
their own annotations, thumbnails of recent artifacts, verbal exchanges,
and so on.  The order of those walks is minable.  Frequent cue
sequences, plus a transition graph, turn into a recommended cue order
for the next resumption.
"""

from datetime import datetime, timedelta, timezone
from fractions import Fraction

from switchlens import (
    DEFAULT_CUE_ORDER,
    CueSession,
    CueType,
    TaskType,
    build_graph,
    mine_sequences,
    recommend_order,
)

A = CueType.ANNOTATION
T = CueType.THUMBNAIL
V = CueType.VERBAL

t0 = datetime(2026, 3, 2, 9, 30, tzinfo=timezone.utc)


def session(session_id, *cues):
    timed = [(cue, t0 + timedelta(seconds=10 * i)) for i, cue in enumerate(cues)]
    return CueSession.from_cues(session_id, "atlas-validation-7", TaskType.MODELING, timed)


# Six recorded resumptions.  Most start from the annotation trail and
# move on to thumbnails; one detours through a verbal exchange first.
sessions = [
    session("s1", A, T),
    session("s2", A, V, T),
    session("s3", A, T, V),
    session("s4", V, A, T),
    session("s5", A, T),
    session("s6", T, A),
]

# The transition graph counts consecutive hops, one unit per hop.
graph = build_graph(sessions)
for (src, dst), weight in sorted(graph.edges.items(), key=lambda e: (-e[1], e[0][0].value)):
    print(f"  {src.value:>10} -> {dst.value:<10} x{weight}")

# Sequences need not be contiguous: s2 still supports (annotation,
# thumbnail) even though a verbal check sits in between.  Each session
# counts once, and confidence compares against the one-shorter prefix.
rules = mine_sequences(sessions, min_support=Fraction(1, 2))
print()
for rule in rules:
    chain = " -> ".join(cue.value for cue in rule.sequence)
    print(f"  {chain}: support {rule.support}, confidence {rule.confidence}")

# The strongest maximal sequence seeds the recommended order; cues it
# does not mention follow in the default order.
order = recommend_order(TaskType.MODELING, rules, graph)
print()
print("recommended cue order: " + ", ".join(cue.value for cue in order))
print("default cue order:     " + ", ".join(cue.value for cue in DEFAULT_CUE_ORDER))
