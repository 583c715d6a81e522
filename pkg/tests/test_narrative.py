import copy
import json
from fractions import Fraction

import pytest

from switchlens.cue_mining import CueSequenceRule, CueType
from switchlens.narrative import (
    Lexicon,
    NarrativeRule,
    UnknownVocabularyItem,
    default_lexicon,
    render_cue_sequence,
    render_disruptiveness,
    rounded_percent,
)
from switchlens.pattern_mining import (
    AssociationRule,
    CharacteristicItem,
    DisruptivenessItem,
    Level,
    Measure,
)
from switchlens.task_model import TaskType


def rule(antecedent, consequent, support=Fraction(3, 5), confidence=Fraction(1)):
    return AssociationRule(
        task_type=TaskType.MODELING,
        antecedent=frozenset(antecedent),
        consequent=frozenset(consequent),
        support=support,
        confidence=confidence,
    )


CASE_STUDY_RULE = rule(
    {CharacteristicItem("initiator", "self"), CharacteristicItem("time_of_day", "morning")},
    {DisruptivenessItem(Measure.INTERRUPTION_LAG, Level.HIGH)},
)


def test_rounded_percent_half_up():
    assert rounded_percent(Fraction(1, 2)) == 50
    assert rounded_percent(Fraction(3, 5)) == 60
    assert rounded_percent(Fraction(2, 3)) == 67
    assert rounded_percent(Fraction(1, 3)) == 33
    assert rounded_percent(Fraction(1, 200)) == 1
    assert rounded_percent(Fraction(1, 1000)) == 0
    assert rounded_percent(Fraction(599, 1000)) == 60
    assert rounded_percent(Fraction(1)) == 100
    assert rounded_percent(Fraction(0)) == 0


def test_case_study_sentence_exact():
    narrative = render_disruptiveness(CASE_STUDY_RULE)
    assert narrative.text == (
        "Self-switching a requirements modeling task in the morning contributes "
        "to a greater interruption lag (confidence 100%, support 60%)"
    )
    assert narrative.support == Fraction(3, 5)
    assert narrative.confidence == 1
    assert narrative.rule is CASE_STUDY_RULE


def test_external_frame_uses_verb_phrases():
    r = rule(
        {CharacteristicItem("initiator", "external"), CharacteristicItem("blockage", "no")},
        {DisruptivenessItem(Measure.FRAGMENTS, Level.HIGH)},
        support=Fraction(1, 2),
        confidence=Fraction(2, 3),
    )
    narrative = render_disruptiveness(r)
    assert narrative.text == (
        "Externally-interrupted requirements modeling tasks when not blocked tend "
        "to shatter into more fragments (confidence 67%, support 50%)"
    )


def test_no_initiator_frame():
    r = rule(
        {CharacteristicItem("time_of_day", "evening")},
        {DisruptivenessItem(Measure.RESUMPTION_LAG, Level.LOW)},
    )
    narrative = render_disruptiveness(r)
    assert narrative.text.startswith("An interrupted requirements modeling task in the evening")
    assert "a shorter resumption lag" in narrative.text


def test_multiple_consequents_joined_in_measure_order():
    r = rule(
        {CharacteristicItem("initiator", "self")},
        {
            DisruptivenessItem(Measure.INTERRUPTION_LAG, Level.HIGH),
            DisruptivenessItem(Measure.FRAGMENTS, Level.HIGH),
            DisruptivenessItem(Measure.RESUMPTION_LAG, Level.LOW),
        },
    )
    narrative = render_disruptiveness(r)
    assert (
        "more task fragments, a shorter resumption lag, and a greater interruption lag"
        in narrative.text
    )


def test_modifiers_follow_lexicon_key_order():
    r = rule(
        {
            CharacteristicItem("initiator", "self"),
            CharacteristicItem("context_switch", "different_project"),
            CharacteristicItem("time_of_day", "morning"),
        },
        {DisruptivenessItem(Measure.FRAGMENTS, Level.HIGH)},
    )
    narrative = render_disruptiveness(r)
    assert "in the morning across projects" in narrative.text


def test_rendering_is_deterministic():
    first = render_disruptiveness(CASE_STUDY_RULE)
    second = render_disruptiveness(CASE_STUDY_RULE)
    assert first.text == second.text


def test_rendering_is_injective_over_distinct_rules():
    rules = []
    for initiator in ("self", "external"):
        for tod in ("morning", "afternoon", "evening"):
            for level in (Level.LOW, Level.HIGH):
                for measure in Measure:
                    rules.append(
                        rule(
                            {
                                CharacteristicItem("initiator", initiator),
                                CharacteristicItem("time_of_day", tod),
                            },
                            {DisruptivenessItem(measure, level)},
                        )
                    )
    texts = [render_disruptiveness(r).text for r in rules]
    assert len(set(texts)) == len(texts)


def test_explicit_task_type_overrides_rule():
    narrative = render_disruptiveness(CASE_STUDY_RULE, task_type=TaskType.VALIDATION)
    assert "requirements validation task" in narrative.text


def test_unknown_vocabulary_fails_loudly():
    data = copy.deepcopy(default_lexicon().data)
    del data["characteristics"]["time_of_day"]["morning"]
    stripped = Lexicon(data)
    with pytest.raises(UnknownVocabularyItem):
        render_disruptiveness(CASE_STUDY_RULE, lexicon=stripped)


def test_lexicon_rejects_wrong_version():
    data = copy.deepcopy(default_lexicon().data)
    data["version"] = 2
    with pytest.raises(ValueError):
        Lexicon(data)


def test_lexicon_rejects_missing_section():
    data = copy.deepcopy(default_lexicon().data)
    del data["cues"]
    with pytest.raises(ValueError):
        Lexicon(data)


def test_lexicon_load_roundtrip(tmp_path):
    path = tmp_path / "lexicon.json"
    path.write_text(json.dumps(default_lexicon().data), encoding="utf-8")
    loaded = Lexicon.load(path)
    assert render_disruptiveness(CASE_STUDY_RULE, lexicon=loaded).text == (
        render_disruptiveness(CASE_STUDY_RULE).text
    )


def test_cue_sequence_sentence():
    r = CueSequenceRule(
        (CueType.ANNOTATION, CueType.THUMBNAIL),
        support=Fraction(2, 3),
        confidence=Fraction(2, 3),
    )
    narrative = render_cue_sequence(r, TaskType.MODELING)
    assert narrative.text == (
        "Developers resuming a requirements modeling task typically review "
        "annotation cues, then thumbnail images (confidence 67%, support 67%)"
    )


def test_narrative_requires_text():
    with pytest.raises(ValueError):
        NarrativeRule(text="", rule=CASE_STUDY_RULE, support=Fraction(1), confidence=Fraction(1))
