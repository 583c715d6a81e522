"""Disruptiveness pattern mining.

Interrupted-task records are reduced to categorical items -- interruption
characteristics on one side, discretized disruptiveness levels on the other
-- and mined level-wise for frequent mixed item sets, which become
association rules "characteristics => disruptiveness" with exact rational
support and confidence.

Two filters keep the search honest and small: mining always runs within a
single task type, and item sets drawn entirely from one side (all
characteristics, or all disruptiveness levels) are discarded from size 2
upward, since they can never form a rule with both sides non-empty.
"""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from .task_model import TaskType


class EmptyInput(ValueError):
    pass


class Measure(enum.Enum):
    FRAGMENTS = "fragments"
    RESUMPTION_LAG = "resumption_lag"
    INTERRUPTION_LAG = "interruption_lag"


class Level(enum.Enum):
    LOW = "low"
    HIGH = "high"


#: Declared finite vocabulary for interruption characteristics.  One value
#: per key per record; "unknown" covers data the log could not provide.
CHARACTERISTIC_VOCABULARY: Mapping[str, frozenset[str]] = {
    "initiator": frozenset({"self", "external"}),
    "time_of_day": frozenset({"morning", "afternoon", "evening"}),
    "context_switch": frozenset({"same_project", "different_project", "unknown"}),
    "interrupting_type": frozenset({t.value for t in TaskType} | {"unknown"}),
    "priority_relation": frozenset({"higher", "same", "lower", "unknown"}),
    "blockage": frozenset({"yes", "no"}),
    "boredom": frozenset({"yes", "no"}),
}


@dataclass(frozen=True, slots=True)
class CharacteristicItem:
    key: str
    value: str

    def __post_init__(self):
        allowed = CHARACTERISTIC_VOCABULARY.get(self.key)
        if allowed is None:
            raise ValueError(f"unknown characteristic key {self.key!r}")
        if self.value not in allowed:
            raise ValueError(f"value {self.value!r} not in vocabulary for {self.key!r}")

    @property
    def sort_key(self) -> tuple:
        return (0, self.key, self.value)


@dataclass(frozen=True, slots=True)
class DisruptivenessItem:
    measure: Measure
    level: Level

    @property
    def sort_key(self) -> tuple:
        return (1, self.measure.value, self.level.value)


Item = Union[CharacteristicItem, DisruptivenessItem]
ItemSet = frozenset  # of Item


def item_sort_key(item: Item) -> tuple:
    return item.sort_key


def sorted_items(items: Iterable[Item]) -> tuple[Item, ...]:
    return tuple(sorted(items, key=item_sort_key))


def is_mixed(items: ItemSet) -> bool:
    """Does the set draw from both sides of the alphabet?"""
    has_char = any(isinstance(i, CharacteristicItem) for i in items)
    has_disr = any(isinstance(i, DisruptivenessItem) for i in items)
    return has_char and has_disr


@dataclass(frozen=True, slots=True)
class MiningRecord:
    """One interruption episode, reduced to categorical items."""

    task_type: TaskType
    characteristics: frozenset[CharacteristicItem]
    disruptiveness: frozenset[DisruptivenessItem]

    def __post_init__(self):
        keys = [c.key for c in self.characteristics]
        if len(keys) != len(set(keys)):
            raise ValueError("at most one value per characteristic key")
        measures = [d.measure for d in self.disruptiveness]
        if len(measures) != len(set(measures)):
            raise ValueError("at most one level per disruptiveness measure")

    @property
    def items(self) -> ItemSet:
        return frozenset(self.characteristics) | frozenset(self.disruptiveness)


@dataclass(frozen=True, slots=True)
class RawInterruptionRecord:
    """An interruption episode before discretization.

    Measures are optional: an episode that was never resumed has no
    resumption lag yet, and simply contributes no item for that measure.
    """

    task_type: TaskType
    characteristics: frozenset[CharacteristicItem]
    fragments: int | None = None
    resumption_lag_s: float | None = None
    interruption_lag_s: float | None = None

    def measure_value(self, measure: Measure) -> float | None:
        if measure is Measure.FRAGMENTS:
            return None if self.fragments is None else float(self.fragments)
        if measure is Measure.RESUMPTION_LAG:
            return self.resumption_lag_s
        return self.interruption_lag_s


@dataclass(frozen=True)
class Discretization:
    """How raw measures map to low/high.

    ``median`` mode derives one threshold per measure from the records being
    discretized (mean of the two middle values for even counts); ``fixed``
    mode uses the supplied thresholds.  A value is high iff strictly greater
    than the threshold.
    """

    mode: str = "median"
    thresholds: Mapping[Measure, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("median", "fixed"):
            raise ValueError(f"unknown discretization mode {self.mode!r}")
        for value in self.thresholds.values():
            if not math.isfinite(value):
                raise ValueError("thresholds must be finite")

    def resolve(self, records: Sequence[RawInterruptionRecord]) -> dict[Measure, float]:
        if self.mode == "fixed":
            return dict(self.thresholds)
        resolved: dict[Measure, float] = {}
        for measure in Measure:
            values = [v for r in records if (v := r.measure_value(measure)) is not None]
            if values:
                resolved[measure] = float(statistics.median(values))
        return resolved


@dataclass(frozen=True)
class MiningParams:
    min_support: Fraction
    min_confidence: Fraction
    task_type: TaskType
    discretization: Discretization = field(default_factory=Discretization)

    def __post_init__(self):
        for name, value in (("min_support", self.min_support), ("min_confidence", self.min_confidence)):
            if not 0 < value <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {value}")


@dataclass(frozen=True)
class AssociationRule:
    """A mined rule: within one task type, characteristics imply levels."""

    task_type: TaskType
    antecedent: frozenset[CharacteristicItem]
    consequent: frozenset[DisruptivenessItem]
    support: Fraction
    confidence: Fraction

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError("antecedent and consequent must be non-empty")
        measures = [d.measure for d in self.consequent]
        if len(measures) != len(set(measures)):
            raise ValueError("at most one level per measure in the consequent")

    @property
    def items(self) -> ItemSet:
        return frozenset(self.antecedent) | frozenset(self.consequent)

    def sort_key(self) -> tuple:
        return (
            -self.confidence,
            -self.support,
            tuple(i.sort_key for i in sorted_items(self.antecedent)),
            tuple(i.sort_key for i in sorted_items(self.consequent)),
        )


def discretize(
    records: Sequence[RawInterruptionRecord],
    discretization: Discretization | None = None,
) -> list[MiningRecord]:
    """Map raw measures to low/high items; absent measures stay absent."""
    if not records:
        raise EmptyInput("no records to discretize")
    discretization = discretization or Discretization()
    thresholds = discretization.resolve(records)
    out = []
    for record in records:
        items = set()
        for measure in Measure:
            value = record.measure_value(measure)
            if value is None:
                continue
            threshold = thresholds.get(measure)
            if threshold is None:
                continue
            level = Level.HIGH if value > threshold else Level.LOW
            items.add(DisruptivenessItem(measure=measure, level=level))
        out.append(
            MiningRecord(
                task_type=record.task_type,
                characteristics=record.characteristics,
                disruptiveness=frozenset(items),
            )
        )
    return out


def filter_by_type(records: Sequence, task_type: TaskType) -> list:
    """Keep only records of one task type, preserving order."""
    return [r for r in records if r.task_type is task_type]


def support(itemset: Iterable[Item], records: Sequence[MiningRecord]) -> Fraction:
    """Fraction of records containing every item of the set."""
    if not records:
        raise EmptyInput("support is undefined over zero records")
    wanted = frozenset(itemset)
    hits = sum(1 for r in records if wanted <= r.items)
    return Fraction(hits, len(records))


def _count_candidates(
    candidates: Iterable[ItemSet], record_items: Sequence[ItemSet]
) -> dict[ItemSet, int]:
    counts = {c: 0 for c in candidates}
    for items in record_items:
        for candidate in counts:
            if candidate <= items:
                counts[candidate] += 1
    return counts


def mine_frequent(
    records: Sequence[MiningRecord], params: MiningParams
) -> dict[ItemSet, Fraction]:
    """Level-wise search for frequent mixed item sets.

    Returns every mixed set of size >= 2 whose support meets
    ``params.min_support``, mapped to its exact support.  Single items are
    counted to seed the search but are never part of the result, and
    candidates whose items all come from one side are discarded outright.
    """
    if not records:
        return {}
    record_items = [r.items for r in records]
    total = len(records)

    singles = sorted({item for items in record_items for item in items}, key=item_sort_key)
    counts = _count_candidates([frozenset([i]) for i in singles], record_items)
    frequent_1 = {
        s for s, c in counts.items() if Fraction(c, total) >= params.min_support
    }

    chars_1 = sorted(
        (s for s in frequent_1 if isinstance(next(iter(s)), CharacteristicItem)),
        key=lambda s: next(iter(s)).sort_key,
    )
    disrs_1 = sorted(
        (s for s in frequent_1 if isinstance(next(iter(s)), DisruptivenessItem)),
        key=lambda s: next(iter(s)).sort_key,
    )

    result: dict[ItemSet, Fraction] = {}

    # Size 2: only mixed pairs survive the one-side filter.
    candidates = [c | d for c in chars_1 for d in disrs_1]
    size = 2
    current: set[ItemSet] = set()
    counts = _count_candidates(candidates, record_items)
    for candidate, count in counts.items():
        sup = Fraction(count, total)
        if sup >= params.min_support:
            current.add(candidate)
            result[candidate] = sup

    while current:
        size += 1
        candidates = set()
        for a, b in combinations(current, 2):
            union = a | b
            if len(union) != size:
                continue
            # Anti-monotone prune over the mixed subsets we have supports for.
            if all(
                frozenset(sub) in current
                for sub in combinations(union, size - 1)
                if is_mixed(frozenset(sub))
            ):
                candidates.add(union)
        if not candidates:
            break
        counts = _count_candidates(candidates, record_items)
        current = set()
        for candidate, count in counts.items():
            sup = Fraction(count, total)
            if sup >= params.min_support:
                current.add(candidate)
                result[candidate] = sup

    return result


def derive_rules(
    frequent: Mapping[ItemSet, Fraction],
    records: Sequence[MiningRecord],
    params: MiningParams,
) -> list[AssociationRule]:
    """Turn each frequent mixed set into a rule and keep the confident ones.

    The antecedent is the set's characteristic side, the consequent its
    disruptiveness side; confidence is support of the whole set over support
    of the antecedent alone.  Output order is fully deterministic.
    """
    rules = []
    for itemset, sup in frequent.items():
        antecedent = frozenset(i for i in itemset if isinstance(i, CharacteristicItem))
        consequent = frozenset(i for i in itemset if isinstance(i, DisruptivenessItem))
        confidence = sup / support(antecedent, records)
        if confidence >= params.min_confidence:
            rules.append(
                AssociationRule(
                    task_type=params.task_type,
                    antecedent=antecedent,
                    consequent=consequent,
                    support=sup,
                    confidence=confidence,
                )
            )
    rules.sort(key=AssociationRule.sort_key)
    return rules


def mine(
    records: Sequence[RawInterruptionRecord], params: MiningParams
) -> list[AssociationRule]:
    """Full pipeline: filter to the task type, discretize, mine, derive rules."""
    filtered = filter_by_type(records, params.task_type)
    if not filtered:
        return []
    discretized = discretize(filtered, params.discretization)
    frequent = mine_frequent(discretized, params)
    return derive_rules(frequent, discretized, params)


def mine_records(
    records: Sequence[MiningRecord], params: MiningParams
) -> list[AssociationRule]:
    """As :func:`mine`, but over records that are already discretized."""
    filtered = filter_by_type(records, params.task_type)
    if not filtered:
        return []
    frequent = mine_frequent(filtered, params)
    return derive_rules(frequent, filtered, params)
