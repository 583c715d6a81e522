"""Deterministic narrative sentences for mined rules.

Structured rules are useful to machines; people get one sentence each,
rendered from a fixed phrase lexicon.  Rendering is a pure function of the
rule, so any narrative shipped next to its rule can be regenerated and
checked byte for byte.  Items outside the lexicon fail loudly: a silent
fallback to raw keys would defeat the point of the module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

from .cue_mining import CueSequenceRule
from .pattern_mining import AssociationRule, CharacteristicItem, DisruptivenessItem
from .task_model import TaskType

LEXICON_VERSION = 1


class UnknownVocabularyItem(KeyError):
    pass


def rounded_percent(value: Fraction) -> int:
    """Round a [0, 1] fraction to a whole percentage, halves up."""
    return int((value * 100 + Fraction(1, 2)) // 1)


@dataclass(frozen=True)
class Lexicon:
    """Phrase tables backing the narrative templates (versioned JSON file)."""

    data: dict

    def __post_init__(self):
        version = self.data.get("version")
        if version != LEXICON_VERSION:
            raise ValueError(f"unsupported lexicon version {version!r}")
        for section in (
            "frames",
            "cue_frame",
            "task_types",
            "characteristics",
            "characteristic_order",
            "disruptiveness_object",
            "disruptiveness_verb",
            "measure_order",
            "cues",
        ):
            if section not in self.data:
                raise ValueError(f"lexicon missing section {section!r}")

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def _lookup(self, *path: str) -> str:
        node = self.data
        for part in path:
            if not isinstance(node, dict) or part not in node:
                raise UnknownVocabularyItem("/".join(path))
            node = node[part]
        return node

    def task_phrase(self, task_type: TaskType) -> str:
        return self._lookup("task_types", task_type.value)

    def characteristic_phrase(self, item: CharacteristicItem) -> str:
        return self._lookup("characteristics", item.key, item.value)

    def disruptiveness_phrase(self, item: DisruptivenessItem, style: str) -> str:
        table = "disruptiveness_verb" if style == "verb" else "disruptiveness_object"
        return self._lookup(table, item.measure.value, item.level.value)

    def cue_phrase(self, cue_name: str) -> str:
        return self._lookup("cues", cue_name)

    def frame(self, key: str) -> str:
        return self._lookup("frames", key)

    def cue_frame(self) -> str:
        return self._lookup("cue_frame")


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files(__package__).joinpath("lexicon.json").read_text(encoding="utf-8")
    return Lexicon(json.loads(text))


@dataclass(frozen=True)
class NarrativeRule:
    """A rendered sentence bound to the structured rule behind it."""

    text: str
    rule: Union[AssociationRule, CueSequenceRule]
    support: Fraction
    confidence: Fraction

    def __post_init__(self):
        if not self.text:
            raise ValueError("narrative text must be non-empty")


def _join_phrases(phrases: list[str]) -> str:
    if len(phrases) == 1:
        return phrases[0]
    if len(phrases) == 2:
        return f"{phrases[0]} and {phrases[1]}"
    return ", ".join(phrases[:-1]) + f", and {phrases[-1]}"


def render_disruptiveness(
    rule: AssociationRule,
    task_type: TaskType | None = None,
    lexicon: Lexicon | None = None,
) -> NarrativeRule:
    """Render an association rule as one narrative sentence.

    The sentence frame is picked by the rule's initiator item (self,
    external, or neither); the remaining characteristics become modifier
    phrases in a fixed key order and the consequent levels become the
    outcome phrases.  Percentages are whole numbers, halves rounded up.
    """
    lexicon = lexicon or default_lexicon()
    task_type = task_type or rule.task_type

    initiator = None
    modifiers = []
    order = {key: i for i, key in enumerate(lexicon.data["characteristic_order"])}
    for item in sorted(
        rule.antecedent,
        key=lambda it: (order.get(it.key, len(order)), it.key, it.value),
    ):
        if item.key == "initiator":
            initiator = item.value
        else:
            if item.key not in order:
                raise UnknownVocabularyItem(item.key)
            modifiers.append(lexicon.characteristic_phrase(item))

    frame_key = initiator if initiator is not None else "none"
    frame = lexicon.frame(frame_key)
    style = "verb" if frame_key == "external" else "object"

    measure_order = {name: i for i, name in enumerate(lexicon.data["measure_order"])}
    consequents = [
        lexicon.disruptiveness_phrase(item, style)
        for item in sorted(
            rule.consequent,
            key=lambda it: (measure_order.get(it.measure.value, len(measure_order)), it.measure.value),
        )
    ]

    characteristics = "".join(f" {phrase}" for phrase in modifiers)
    text = frame.format(
        task=lexicon.task_phrase(task_type),
        characteristics=characteristics,
        consequents=_join_phrases(consequents),
        confidence=rounded_percent(rule.confidence),
        support=rounded_percent(rule.support),
    )
    return NarrativeRule(text=text, rule=rule, support=rule.support, confidence=rule.confidence)


def render_cue_sequence(
    rule: CueSequenceRule,
    task_type: TaskType,
    lexicon: Lexicon | None = None,
) -> NarrativeRule:
    """Render a mined cue sequence as one navigation-advice sentence."""
    lexicon = lexicon or default_lexicon()
    cues = [lexicon.cue_phrase(cue.value) for cue in rule.sequence]
    text = lexicon.cue_frame().format(
        task=lexicon.task_phrase(task_type),
        cues=", then ".join(cues),
        confidence=rounded_percent(rule.confidence),
        support=rounded_percent(rule.support),
    )
    return NarrativeRule(text=text, rule=rule, support=rule.support, confidence=rule.confidence)
