"""Acceptance gate: the eight primary criteria, one test per criterion.

Every check compares the fast implementation against an independent
reference (exhaustive oracle, pinned constant, or library-level call on
the same snapshot); nothing here trusts the code under test for its own
expected values.  Timing budgets are asserted where the criterion fixes
one.  Each test ends by printing one `[ACCEPTANCE] <criterion>: PASS`
line (visible with `pytest -s` or in captured output).
"""

import random
from datetime import timedelta
from fractions import Fraction
from time import perf_counter

import pytest
from fastapi.testclient import TestClient

from switchlens.config import ServiceConfig
from switchlens.cue_mining import (
    DEFAULT_CUE_ORDER,
    CueSequenceRule,
    CueSession,
    CueType,
    is_subsequence,
    mine_sequences,
    recommend_order,
)
from switchlens.logfmt import serialize
from switchlens.narrative import render_cue_sequence, render_disruptiveness
from switchlens.pattern_mining import (
    CharacteristicItem,
    DisruptivenessItem,
    Level,
    Measure,
    MiningParams,
    MiningRecord,
    mine_frequent,
    mine_records,
)
from switchlens.service import create_app, graph_payload
from switchlens.simulate import generate_log, random_task_events
from switchlens.store import EventStore, snapshot_graph, snapshot_mining_records
from switchlens.task_model import (
    INITIAL_STATE,
    EventKind,
    IllegalTransition,
    Phase,
    TaskEvent,
    TaskType,
    TerminalState,
    apply_event,
    derive_measures,
    detect_trap,
    replay,
)

from conftest import BASE, at, make_descriptor, make_event
from oracles import (
    brute_force_frequent,
    brute_force_rules,
    brute_force_sequences,
    rule_from_payload,
    sequence_rule_from_payload,
)
from test_pattern_mining import case_study_records
from test_service import seeded_store
from test_task_model import LEGAL, _PHASE_PREFIX

HALF = Fraction(1, 2)
CASE_STUDY_PARAMS = MiningParams(
    min_support=HALF, min_confidence=HALF, task_type=TaskType.MODELING
)


def maximal_rules(rules):
    return [
        rule
        for rule in rules
        if not any(other is not rule and rule.items < other.items for other in rules)
    ]


# 1 -----------------------------------------------------------------------


def test_case_study_reproduction():
    started = perf_counter()
    records = case_study_records()
    rules = mine_records(records, CASE_STUDY_PARAMS)
    maximal = maximal_rules(rules)
    assert len(maximal) == 1
    rule = maximal[0]
    assert rule.antecedent == frozenset(
        {CharacteristicItem("initiator", "self"), CharacteristicItem("time_of_day", "morning")}
    )
    assert rule.consequent == frozenset(
        {DisruptivenessItem(Measure.INTERRUPTION_LAG, Level.HIGH)}
    )
    assert rule.confidence == Fraction(1)
    oracle = brute_force_frequent(records, CASE_STUDY_PARAMS.min_support)
    assert rule.support == oracle[rule.items]
    assert perf_counter() - started < 1.0
    print("[ACCEPTANCE] case-study reproduction: PASS")


# 2 -----------------------------------------------------------------------

_CHAR_POOL = (
    CharacteristicItem("initiator", "self"),
    CharacteristicItem("initiator", "external"),
    CharacteristicItem("time_of_day", "morning"),
    CharacteristicItem("blockage", "yes"),
)
_DISR_POOL = tuple(
    DisruptivenessItem(measure, level)
    for measure in Measure
    for level in (Level.LOW, Level.HIGH)
)


def random_record_set(rng):
    """Up to 20 records over a universe of at most 8 items."""
    by_key = {}
    for item in rng.sample(_CHAR_POOL, rng.randint(1, 4)):
        by_key.setdefault(item.key, []).append(item)
    by_measure = {}
    for item in rng.sample(_DISR_POOL, rng.randint(1, 4)):
        by_measure.setdefault(item.measure, []).append(item)
    records = []
    for _ in range(rng.randint(1, 20)):
        chars = {rng.choice(options) for options in by_key.values() if rng.random() < 0.6}
        disrs = {rng.choice(options) for options in by_measure.values() if rng.random() < 0.6}
        records.append(MiningRecord(TaskType.MODELING, frozenset(chars), frozenset(disrs)))
    return records


def test_apriori_oracle_equivalence():
    rng = random.Random(20260302)
    started = perf_counter()
    for _ in range(200):
        records = random_record_set(rng)
        params = MiningParams(
            min_support=Fraction(rng.randint(1, 4), 4),
            min_confidence=Fraction(rng.randint(1, 4), 4),
            task_type=TaskType.MODELING,
        )
        assert mine_frequent(records, params) == brute_force_frequent(
            records, params.min_support
        )
        assert mine_records(records, params) == brute_force_rules(records, params)
    assert perf_counter() - started < 30.0
    print("[ACCEPTANCE] apriori oracle equivalence: PASS")


# 3 -----------------------------------------------------------------------


def test_pruning_rule():
    rng = random.Random(977)
    emitted = 0
    for _ in range(100):
        records = random_record_set(rng)
        params = MiningParams(
            min_support=Fraction(1, 8), min_confidence=Fraction(1, 8), task_type=TaskType.MODELING
        )
        for itemset in mine_frequent(records, params):
            emitted += 1
            assert len(itemset) >= 2
            chars = {i for i in itemset if isinstance(i, CharacteristicItem)}
            assert chars, f"all-disruptiveness set emitted: {itemset}"
            assert itemset - chars, f"all-characteristic set emitted: {itemset}"
    assert emitted > 0, "generator produced no frequent sets to check"
    print("[ACCEPTANCE] pruning rule: PASS")


# 4 -----------------------------------------------------------------------


def test_state_machine_suite():
    rng = random.Random(314159)
    for i in range(100):
        task_id = f"t{i}"
        descriptor = make_descriptor(task_id=task_id)
        events = random_task_events(rng, task_id, "p1", BASE, ("p2", "p3"))
        first = replay(descriptor, events)
        second = replay(descriptor, events)
        assert first == second
        resumes = sum(1 for e in events if e.kind is EventKind.RESUMED)
        assert derive_measures(first).fragments == 1 + resumes

    for phase in Phase:
        state = INITIAL_STATE
        for step, kind in enumerate(_PHASE_PREFIX[phase]):
            state = apply_event(state, make_event(kind, step * 60))
        assert state.phase is phase
        for kind in EventKind:
            event = make_event(kind, 10_000)
            if phase in (Phase.COMPLETED, Phase.TRAPPED):
                with pytest.raises(TerminalState):
                    apply_event(state, event)
            elif (phase, kind) in LEGAL:
                apply_event(state, event)
            else:
                with pytest.raises(IllegalTransition):
                    apply_event(state, event)

    suspended = replay(
        make_descriptor(),
        [
            make_event(EventKind.STARTED, 0),
            make_event(EventKind.SWITCH_REQUESTED, 300),
            make_event(EventKind.SUSPENDED, 330),
        ],
    )
    horizon = timedelta(hours=1)
    boundary = at(330) + horizon
    assert detect_trap(suspended, boundary, horizon) is False
    assert detect_trap(suspended, boundary + timedelta(milliseconds=1), horizon) is True
    print("[ACCEPTANCE] state-machine suite: PASS")


# 5 -----------------------------------------------------------------------


def random_sessions(rng):
    cues = list(CueType)
    sessions = []
    for i in range(rng.randint(1, 10)):
        walk = [rng.choice(cues) for _ in range(rng.randint(1, 6))]
        timed = [(cue, BASE + timedelta(seconds=10 * j)) for j, cue in enumerate(walk)]
        sessions.append(CueSession.from_cues(f"s{i}", "t1", TaskType.MODELING, timed))
    return sessions


def test_sequence_oracle_equivalence():
    rng = random.Random(20270101)
    for _ in range(100):
        sessions = random_sessions(rng)
        min_support = Fraction(rng.randint(1, 4), 4)
        mined = mine_sequences(sessions, min_support)
        assert mined == brute_force_sequences(sessions, min_support)
        supports = {rule.sequence: rule.support for rule in mined}
        for rule in mined:
            prefix = rule.sequence[:-1]
            if len(prefix) >= 2:
                assert prefix in supports
                prefix_support = supports[prefix]
            else:
                hits = sum(1 for s in sessions if is_subsequence(prefix, s.cues))
                prefix_support = Fraction(hits, len(sessions))
            assert rule.support <= prefix_support
    print("[ACCEPTANCE] sequence-mining oracle equivalence: PASS")


# 6 -----------------------------------------------------------------------


def test_recommend_order_contract():
    # Pinned survey ranking: annotations, thumbnails, verbal, eye, behavior graph.
    pinned = [
        CueType.ANNOTATION,
        CueType.THUMBNAIL,
        CueType.VERBAL,
        CueType.EYE,
        CueType.BEHAVIOR_GRAPH,
    ]
    assert list(DEFAULT_CUE_ORDER) == pinned
    assert recommend_order(TaskType.MODELING, []) == pinned

    rng = random.Random(88)
    cues = list(CueType)
    for _ in range(1000):
        rules = [
            CueSequenceRule(
                tuple(rng.choice(cues) for _ in range(rng.randint(2, 4))),
                Fraction(rng.randint(1, 8), 8),
                Fraction(rng.randint(1, 8), 8),
            )
            for _ in range(rng.randint(0, 6))
        ]
        order = recommend_order(TaskType.MODELING, rules)
        assert len(order) == 5
        assert set(order) == set(CueType)
    print("[ACCEPTANCE] recommend_order contract: PASS")


# 7 -----------------------------------------------------------------------


def test_narrative_determinism():
    rules = mine_records(case_study_records(), CASE_STUDY_PARAMS)
    (rule,) = maximal_rules(rules)
    text = render_disruptiveness(rule).text
    prefix = text.split(" (confidence")[0]
    assert prefix == (
        "Self-switching a requirements modeling task in the morning "
        "contributes to a greater interruption lag"
    )

    store = seeded_store()
    app = create_app(store, ServiceConfig())
    with TestClient(app) as client:
        app.state.switchlens.clock = lambda: at(4000)
        association_payloads = []
        sequence_payloads = []

        patterns = client.get("/patterns", params={"task_type": "modeling"}).json()
        association_payloads += patterns["rules"]

        advice = client.get(
            "/advice/switch", params={"task": "act1", "initiator": "self"}
        ).json()
        association_payloads += advice["rules"]

        suspension = client.get("/suspension/susp1").json()
        if suspension["narrative"] is not None:
            association_payloads.append(suspension["narrative"])

        cues = client.get("/resumption/resum1/cues").json()
        sequence_payloads += cues["rules"]

    assert association_payloads and sequence_payloads
    for payload in association_payloads:
        regenerated = render_disruptiveness(rule_from_payload(payload)).text
        assert regenerated == payload["narrative"]
    for payload in sequence_payloads:
        regenerated = render_cue_sequence(
            sequence_rule_from_payload(payload), TaskType.MODELING
        ).text
        assert regenerated == payload["narrative"]
    print("[ACCEPTANCE] narrative determinism: PASS")


# 8 -----------------------------------------------------------------------


def test_end_to_end():
    started = perf_counter()
    log = generate_log(20260820, min_events=10_000)
    event_count = sum(1 for r in log.records if isinstance(r, TaskEvent))
    assert event_count >= 10_000

    store = EventStore()
    report = store.ingest(log.lines())
    assert report.rejected == ()

    probe_batch = [
        serialize(make_descriptor(task_id="probe")),
        serialize(make_event(EventKind.STARTED, 0, "probe")),
    ]
    assert store.ingest(probe_batch).rejected == ()

    config = ServiceConfig()
    app = create_app(store, config)
    with TestClient(app) as client:
        snapshot = store.snapshot()

        patterns = client.get("/patterns", params={"task_type": "modeling"}).json()
        expected_rules = mine_records(
            snapshot_mining_records(
                snapshot, TaskType.MODELING, config.discretization, config.tzinfo
            ),
            MiningParams(
                min_support=config.min_support,
                min_confidence=config.min_confidence,
                task_type=TaskType.MODELING,
                discretization=config.discretization,
            ),
        )
        assert [rule_from_payload(p) for p in patterns["rules"]] == expected_rules

        graph = client.get("/graph/communication").json()
        assert graph == graph_payload(snapshot_graph(snapshot))

        context = {"initiator": "self", "time_of_day": "morning"}
        advice = client.get(
            "/advice/switch",
            params={"task": "probe", "initiator": "self", "time": "morning"},
        ).json()
        expected_applicable = [
            rule
            for rule in expected_rules
            if all(
                item.value == context[item.key]
                for item in rule.antecedent
                if item.key in context
            )
        ]
        assert [rule_from_payload(p) for p in advice["rules"]] == expected_applicable

        predicted = {measure.value: None for measure in Measure}
        for rule in expected_applicable:
            for item in rule.consequent:
                if predicted[item.measure.value] is None:
                    predicted[item.measure.value] = item.level.value
        assert advice["predicted_levels"] == predicted

        full_edges = {(e["from"], e["to"]): e["weight"] for e in graph["edges"]}
        assert advice["graph_slice"]["edges"], "simulated log should touch the graph"
        for edge in advice["graph_slice"]["edges"]:
            assert full_edges[(edge["from"], edge["to"])] == edge["weight"]

    assert perf_counter() - started < 10.0
    print("[ACCEPTANCE] end-to-end pipeline: PASS")
