"""
From raw event log to served advice
===================================

The whole pipeline in one sitting: simulate a team's event log, ingest
it into the append-only store, then ask the store the three questions
the HTTP service answers, which interruptions hurt, who interrupts whom,
and which cues to surface at resumption time.
"""

import tempfile
from fractions import Fraction
from pathlib import Path

from switchlens import MiningParams, TaskType, mine_records
from switchlens.simulate import generate_log
from switchlens.store import EventStore

# A synthetic three-week log: people, task descriptors, task events,
# and recorded cue visits, all as one JSONL stream.
log = generate_log(seed=20260302, n_persons=6, n_tasks=60)
lines = log.lines()
print(f"simulated {len(lines)} records ({len(log.events)} task events)")
print("first line: " + lines[0][:76] + "...")

# Ingest validates every record against the task state machine as it
# lands; nothing interruption-impossible ever enters the store.
with tempfile.TemporaryDirectory() as tmp:
    store = EventStore(Path(tmp) / "events.jsonl")
    report = store.ingest(lines)
    print(f"ingested: {report.accepted} accepted, "
          f"{report.duplicates} duplicates, {len(report.rejected)} rejected")

    # Ingest is idempotent: feeding the same log again changes nothing.
    again = store.ingest(lines)
    print(f"re-ingest: {again.accepted} accepted, {again.duplicates} duplicates")

    # Question 1: which circumstances predict disruptive interruptions?
    records = store.mining_records(TaskType.MODELING)
    params = MiningParams(
        min_support=Fraction(1, 4),
        min_confidence=Fraction(3, 5),
        task_type=TaskType.MODELING,
    )
    rules = mine_records(records, params)
    print(f"\n{len(records)} modeling episodes -> {len(rules)} rules; strongest three:")
    for rule in rules[:3]:
        antecedent = " & ".join(
            f"{i.key}={i.value}"
            for i in sorted(rule.antecedent, key=lambda i: (i.key, i.value))
        )
        consequent = " & ".join(
            f"{i.measure.value}={i.level.value}"
            for i in sorted(rule.consequent, key=lambda i: i.measure.value)
        )
        print(f"  {antecedent} => {consequent} "
              f"(sup {rule.support}, conf {rule.confidence})")

    # Question 2: who interrupts whom?  Self-loops are self-switches.
    graph = store.communication_graph()
    busiest = sorted(graph.edges.items(), key=lambda e: -e[1])[:3]
    print(f"\ncommunication graph: {len(graph.nodes)} people, "
          f"{graph.total_weight} switch requests; busiest edges:")
    for (src, dst), weight in busiest:
        print(f"  {src} -> {dst} x{weight}")

    # Question 3: how do people resume?  Sessions feed the cue miner.
    sessions = store.cue_sessions(TaskType.MODELING)
    print(f"\n{len(sessions)} recorded modeling resumption walks")

# The same store backs the CLI (switchlens ingest/mine/cues/graph/serve)
# and the HTTP service; demos/mine_disruptiveness.py and
# demos/resumption_cues.py show the narrative layers on top.
