"""Resumption-cue interaction mining.

When someone returns to a suspended task they walk through resumption cues
-- annotations, thumbnails, verbal notes, eye-gaze traces, the behavior
graph -- in some order.  Those walks are recorded as sessions, summarized as
a directed transition graph, and mined for frequent time-ordered cue
sequences.  The mined sequences drive the order in which cues are presented
at resumption time; with no history, survey-derived default ranking applies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .task_model import TaskType, quantize_ms


class CueType(enum.Enum):
    ANNOTATION = "annotation"
    THUMBNAIL = "thumbnail"
    VERBAL = "verbal"
    EYE = "eye"
    BEHAVIOR_GRAPH = "behavior_graph"


#: Cue order used when no mined sequence applies, most useful first.
DEFAULT_CUE_ORDER: tuple[CueType, ...] = (
    CueType.ANNOTATION,
    CueType.THUMBNAIL,
    CueType.VERBAL,
    CueType.EYE,
    CueType.BEHAVIOR_GRAPH,
)


def _seq_key(sequence: Sequence[CueType]) -> tuple[str, ...]:
    return tuple(cue.value for cue in sequence)


@dataclass(frozen=True, slots=True)
class CueVisit:
    cue: CueType
    order_index: int
    visit_count: int
    at: datetime

    def __post_init__(self):
        if self.order_index < 1:
            raise ValueError("order_index must be positive")
        if self.visit_count < 1:
            raise ValueError("visit_count must be positive")
        object.__setattr__(self, "at", quantize_ms(self.at))


@dataclass(frozen=True, slots=True)
class CueSession:
    """One resumption's ordered walk through the cues."""

    session_id: str
    task_id: str
    task_type: TaskType
    visits: tuple[CueVisit, ...]

    def __post_init__(self):
        if not self.visits:
            raise ValueError("a session must contain at least one visit")
        seen: dict[CueType, int] = {}
        prev_index = 0
        prev_at: datetime | None = None
        for visit in self.visits:
            if visit.order_index <= prev_index:
                raise ValueError("order_index must be strictly increasing")
            if prev_at is not None and visit.at < prev_at:
                raise ValueError("visit timestamps must be non-decreasing")
            expected = seen.get(visit.cue, 0) + 1
            if visit.visit_count != expected:
                raise ValueError(
                    f"visit_count for {visit.cue.value} should be {expected}, "
                    f"got {visit.visit_count}"
                )
            seen[visit.cue] = expected
            prev_index = visit.order_index
            prev_at = visit.at

    @property
    def cues(self) -> tuple[CueType, ...]:
        return tuple(v.cue for v in self.visits)

    @classmethod
    def from_cues(
        cls,
        session_id: str,
        task_id: str,
        task_type: TaskType,
        timed_cues: Iterable[tuple[CueType, datetime]],
    ) -> "CueSession":
        """Build a session from (cue, time) pairs, deriving indexes and counts."""
        visits = []
        seen: dict[CueType, int] = {}
        for index, (cue, at) in enumerate(timed_cues, start=1):
            seen[cue] = seen.get(cue, 0) + 1
            visits.append(CueVisit(cue=cue, order_index=index, visit_count=seen[cue], at=at))
        return cls(session_id=session_id, task_id=task_id, task_type=task_type, visits=tuple(visits))


@dataclass(frozen=True)
class CueGraph:
    """Directed cue-to-cue transition graph with traversal counts."""

    nodes: frozenset[CueType]
    edges: Mapping[tuple[CueType, CueType], int]

    def weight(self, source: CueType, target: CueType) -> int:
        return self.edges.get((source, target), 0)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


def build_graph(sessions: Sequence[CueSession]) -> CueGraph:
    """Count every adjacent visit pair across sessions."""
    nodes: set[CueType] = set()
    edges: dict[tuple[CueType, CueType], int] = {}
    for session in sessions:
        cues = session.cues
        nodes.update(cues)
        for source, target in zip(cues, cues[1:]):
            edges[(source, target)] = edges.get((source, target), 0) + 1
    return CueGraph(nodes=frozenset(nodes), edges=edges)


@dataclass(frozen=True)
class CueSequenceRule:
    sequence: tuple[CueType, ...]
    support: Fraction
    confidence: Fraction

    def __post_init__(self):
        if len(self.sequence) < 2:
            raise ValueError("a sequence rule needs at least two cues")


def is_subsequence(needle: Sequence[CueType], haystack: Sequence[CueType]) -> bool:
    """Order-preserving, not necessarily contiguous containment."""
    it = iter(haystack)
    return all(cue in it for cue in needle)


def _session_support(
    sequence: tuple[CueType, ...], session_cues: Sequence[tuple[CueType, ...]]
) -> Fraction:
    hits = sum(1 for cues in session_cues if is_subsequence(sequence, cues))
    return Fraction(hits, len(session_cues))


def mine_sequences(
    sessions: Sequence[CueSession],
    min_support: Fraction,
    max_len: int = 4,
) -> list[CueSequenceRule]:
    """Mine frequent cue sequences of length 2..max_len.

    A sequence's support counts each session at most once, however many
    times the subsequence occurs inside it.  Confidence relates a sequence
    to its one-shorter prefix.  Output order: support descending, then
    shorter first, then lexicographic on cue names.
    """
    if not 0 < min_support <= 1:
        raise ValueError(f"min_support must be in (0, 1], got {min_support}")
    if max_len < 2:
        raise ValueError(f"max_len must be >= 2, got {max_len}")
    if not sessions:
        return []

    session_cues = [s.cues for s in sessions]
    supports: dict[tuple[CueType, ...], Fraction] = {}

    frequent_1 = []
    for cue in CueType:
        sup = _session_support((cue,), session_cues)
        supports[(cue,)] = sup
        if sup >= min_support:
            frequent_1.append(cue)

    rules = []
    current: list[tuple[CueType, ...]] = [(cue,) for cue in frequent_1]
    length = 1
    while current and length < max_len:
        length += 1
        extended = []
        for prefix in current:
            for cue in frequent_1:
                candidate = prefix + (cue,)
                sup = _session_support(candidate, session_cues)
                if sup >= min_support:
                    supports[candidate] = sup
                    extended.append(candidate)
                    rules.append(
                        CueSequenceRule(
                            sequence=candidate,
                            support=sup,
                            confidence=sup / supports[prefix],
                        )
                    )
        current = extended

    rules.sort(key=lambda r: (-r.support, len(r.sequence), _seq_key(r.sequence)))
    return rules


def _maximal_rules(rules: Sequence[CueSequenceRule]) -> list[CueSequenceRule]:
    return [
        rule
        for rule in rules
        if not any(
            other is not rule
            and len(other.sequence) > len(rule.sequence)
            and is_subsequence(rule.sequence, other.sequence)
            for other in rules
        )
    ]


def recommend_order(
    task_type: TaskType,
    rules: Sequence[CueSequenceRule],
    graph: CueGraph | None = None,
) -> list[CueType]:
    """Order all five cues for presentation at resumption time.

    The highest-confidence maximal mined rule leads (ties broken toward the
    lexicographically smaller sequence), the remaining cues follow in the
    default ranking.  With no rules for this task type the default ranking
    stands on its own.  The result is always a permutation of every cue.
    """
    del task_type, graph  # rules are already conditioned per task type
    order: list[CueType] = []
    if rules:
        best = min(_maximal_rules(rules), key=lambda r: (-r.confidence, _seq_key(r.sequence)))
        for cue in best.sequence:
            if cue not in order:
                order.append(cue)
    for cue in DEFAULT_CUE_ORDER:
        if cue not in order:
            order.append(cue)
    return order
