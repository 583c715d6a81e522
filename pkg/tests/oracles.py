"""Brute-force reference implementations the fast code is checked against.

Written for clarity over speed: exhaustive enumeration, direct counting.
"""

from fractions import Fraction
from itertools import combinations, product

from switchlens.cue_mining import CueSequenceRule, CueType, is_subsequence
from switchlens.pattern_mining import (
    AssociationRule,
    CharacteristicItem,
    DisruptivenessItem,
    Level,
    Measure,
    is_mixed,
    sorted_items,
)
from switchlens.task_model import TaskType


def brute_force_frequent(records, min_support):
    """Every mixed item set of size >= 2 meeting min_support, by full scan."""
    universe = sorted({i for r in records for i in r.items}, key=lambda i: i.sort_key)
    out = {}
    for size in range(2, len(universe) + 1):
        for combo in combinations(universe, size):
            itemset = frozenset(combo)
            if not is_mixed(itemset):
                continue
            hits = sum(1 for r in records if itemset <= r.items)
            sup = Fraction(hits, len(records))
            if sup >= min_support:
                out[itemset] = sup
    return out


def brute_force_rules(records, params):
    """Rules from brute-force frequent sets, sorted like the real miner."""
    rules = []
    for itemset, sup in brute_force_frequent(records, params.min_support).items():
        antecedent = frozenset(i for i in itemset if isinstance(i, CharacteristicItem))
        consequent = itemset - antecedent
        hits = sum(1 for r in records if antecedent <= r.items)
        confidence = sup / Fraction(hits, len(records))
        if confidence >= params.min_confidence:
            rules.append(
                AssociationRule(
                    task_type=params.task_type,
                    antecedent=antecedent,
                    consequent=frozenset(consequent),
                    support=sup,
                    confidence=confidence,
                )
            )
    rules.sort(key=AssociationRule.sort_key)
    return rules


def brute_force_sequences(sessions, min_support, max_len=4):
    """All frequent cue sequences by enumerating every candidate outright."""
    min_support = Fraction(min_support) if not isinstance(min_support, Fraction) else min_support
    total = len(sessions)
    session_cues = [s.cues for s in sessions]

    def sup(seq):
        hits = sum(1 for cues in session_cues if is_subsequence(seq, cues))
        return Fraction(hits, total)

    rules = []
    for length in range(2, max_len + 1):
        for seq in product(tuple(CueType), repeat=length):
            support = sup(seq)
            if support >= min_support:
                rules.append(
                    CueSequenceRule(
                        sequence=seq,
                        support=support,
                        confidence=support / sup(seq[:-1]),
                    )
                )
    rules.sort(
        key=lambda r: (
            -r.support,
            len(r.sequence),
            tuple(c.value for c in r.sequence),
        )
    )
    return rules


def rule_from_payload(payload):
    """Rebuild the structured association rule carried in a service payload."""
    return AssociationRule(
        task_type=TaskType(payload["task_type"]),
        antecedent=frozenset(
            CharacteristicItem(item["key"], item["value"]) for item in payload["antecedent"]
        ),
        consequent=frozenset(
            DisruptivenessItem(Measure(item["measure"]), Level(item["level"]))
            for item in payload["consequent"]
        ),
        support=Fraction(payload["support_fraction"]),
        confidence=Fraction(payload["confidence_fraction"]),
    )


def sequence_rule_from_payload(payload):
    """Rebuild the structured cue-sequence rule carried in a service payload."""
    return CueSequenceRule(
        sequence=tuple(CueType(name) for name in payload["sequence"]),
        support=Fraction(payload["support_fraction"]),
        confidence=Fraction(payload["confidence_fraction"]),
    )
