"""HTTP/JSON advisory service over an event store.

One endpoint per interruption stage -- switch advice before suspending,
suspension status while away, a resumption plan when coming back -- plus
ingestion, the communication graph, and raw mined patterns.  Every GET is
a pure function of (store snapshot, query): handlers read one snapshot
and derive everything from it, and mining results are cached per
(watermark, parameters).
"""

from __future__ import annotations

import json
import logging
import statistics
import time as time_mod
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from fractions import Fraction
from typing import Callable

from fastapi import FastAPI, HTTPException, Query, Request, Response

from .config import ServiceConfig, as_fraction
from .cue_mining import (
    CueSequenceRule,
    CueType,
    mine_sequences,
    recommend_order,
)
from .logfmt import CueVisitRecord, MalformedLine, format_timestamp, parse_timestamp
from .narrative import Lexicon, default_lexicon, render_cue_sequence, render_disruptiveness
from .pattern_mining import (
    AssociationRule,
    CharacteristicItem,
    EmptyInput,
    Measure,
    MiningParams,
    mine_records,
    sorted_items,
)
from .store import (
    CommunicationGraph,
    EventStore,
    StoreSnapshot,
    episode_characteristics,
    episodes_of,
    snapshot_graph,
    snapshot_mining_records,
    snapshot_raw_records,
)
from .task_model import EventKind, Phase, TaskType, detect_trap, replay

logger = logging.getLogger("switchlens.service")

_PHASE_MISMATCH = 409


def _bad_request(message: str):
    raise HTTPException(status_code=400, detail=message)


def _parse_task_type(raw: str) -> TaskType:
    try:
        return TaskType(raw)
    except ValueError:
        _bad_request(f"unknown task_type {raw!r}")


def _parse_fraction_param(raw: str | None, default: Fraction, name: str) -> Fraction:
    if raw is None:
        return default
    try:
        value = as_fraction(raw)
    except ValueError:
        _bad_request(f"{name} must be a rational in (0, 1]")
    if not 0 < value <= 1:
        _bad_request(f"{name} must be in (0, 1]")
    return value


def rule_payload(rule: AssociationRule, narrative: str) -> dict:
    return {
        "task_type": rule.task_type.value,
        "antecedent": [
            {"key": item.key, "value": item.value}
            for item in sorted_items(rule.antecedent)
        ],
        "consequent": [
            {"measure": item.measure.value, "level": item.level.value}
            for item in sorted_items(rule.consequent)
        ],
        "support": float(rule.support),
        "confidence": float(rule.confidence),
        "support_fraction": str(rule.support),
        "confidence_fraction": str(rule.confidence),
        "narrative": narrative,
    }


def sequence_rule_payload(rule: CueSequenceRule, narrative: str) -> dict:
    return {
        "sequence": [cue.value for cue in rule.sequence],
        "support": float(rule.support),
        "confidence": float(rule.confidence),
        "support_fraction": str(rule.support),
        "confidence_fraction": str(rule.confidence),
        "narrative": narrative,
    }


def graph_payload(graph: CommunicationGraph) -> dict:
    nodes = []
    for person_id in sorted(graph.nodes):
        person = graph.nodes[person_id]
        nodes.append(
            {
                "person_id": person_id,
                "name": person.name if person else None,
                "role": person.role if person else None,
                "projects": list(person.projects) if person else [],
            }
        )
    edges = [
        {"from": a, "to": b, "weight": graph.edges[a, b]}
        for a, b in sorted(graph.edges)
    ]
    return {"nodes": nodes, "edges": edges}


@dataclass
class _AppState:
    store: EventStore
    config: ServiceConfig
    lexicon: Lexicon
    clock: Callable[[], datetime]
    cache: dict = field(default_factory=dict)

    def cached(self, key: tuple, build: Callable[[], object]):
        if key not in self.cache:
            if len(self.cache) >= 64:
                self.cache.pop(next(iter(self.cache)))
            self.cache[key] = build()
        return self.cache[key]

    def mined_rules(
        self,
        snapshot: StoreSnapshot,
        task_type: TaskType,
        min_support: Fraction,
        min_confidence: Fraction,
    ) -> list[AssociationRule]:
        key = (snapshot.watermark, "rules", task_type.value, str(min_support), str(min_confidence))

        def build():
            try:
                records = snapshot_mining_records(
                    snapshot, task_type, self.config.discretization, self.config.tzinfo
                )
            except EmptyInput:
                return []
            if not records:
                return []
            params = MiningParams(
                min_support=min_support,
                min_confidence=min_confidence,
                task_type=task_type,
                discretization=self.config.discretization,
            )
            return mine_records(records, params)

        return self.cached(key, build)

    def sequence_rules(self, snapshot: StoreSnapshot, task_type: TaskType) -> list[CueSequenceRule]:
        key = (
            snapshot.watermark,
            "sequences",
            task_type.value,
            str(self.config.sequence_min_support),
            self.config.sequence_max_len,
        )

        def build():
            sessions = [s for s in snapshot.cue_sessions if s.task_type is task_type]
            if not sessions:
                return []
            return mine_sequences(
                sessions,
                min_support=self.config.sequence_min_support,
                max_len=self.config.sequence_max_len,
            )

        return self.cached(key, build)


def _trace_or_404(snapshot: StoreSnapshot, task_id: str):
    descriptor = snapshot.descriptors.get(task_id)
    if descriptor is None:
        raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
    return replay(descriptor, snapshot.events.get(task_id, ()))


def _resumption_episode(trace) -> int | None:
    """Number of the resumption being worked through, or None if there is none.

    While waiting to resume this is the episode about to close; right after
    a Resumed event it is the one just closed, still accepting cue visits.
    """
    state = trace.final_state
    resumed = max(state.fragment_index - 1, 0)
    if state.phase is Phase.RESUMPTION_PENDING:
        return resumed + 1
    if state.phase is Phase.ACTIVE and trace.steps and trace.steps[-1].event.kind is EventKind.RESUMED:
        return resumed
    return None


def create_app(store: EventStore, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    lexicon = (
        Lexicon.load(config.lexicon_path) if config.lexicon_path else default_lexicon()
    )
    state = _AppState(
        store=store,
        config=config,
        lexicon=lexicon,
        clock=lambda: datetime.now(timezone.utc),
    )
    app = FastAPI(title="switchlens", version="0.1.0")
    app.state.switchlens = state

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time_mod.perf_counter()
        response = await call_next(request)
        logger.info(
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "duration_ms": round((time_mod.perf_counter() - started) * 1000, 3),
                }
            )
        )
        return response

    # -- ingestion ---------------------------------------------------------

    @app.post("/events")
    async def post_events(request: Request):
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            _bad_request("body must be UTF-8")
        lines: list[str]
        try:
            parsed = json.loads(text) if text.strip() else []
        except json.JSONDecodeError:
            # Not a JSON document: treat the body as log lines.
            lines = text.splitlines()
        else:
            if isinstance(parsed, list):
                lines = [json.dumps(item) for item in parsed]
            elif isinstance(parsed, dict):
                lines = [json.dumps(parsed)]
            else:
                _bad_request("body must be a JSON array of records or log lines")
        report = state.store.ingest(lines)
        return {
            "accepted": report.accepted,
            "duplicates": report.duplicates,
            "rejected": [
                {"line_no": r.line_no, "reason": r.reason} for r in report.rejected
            ],
        }

    # -- stage 1: before the switch ---------------------------------------

    @app.get("/advice/switch")
    def advice_switch(
        task: str,
        initiator: str | None = None,
        time: str | None = None,
        blockage: str | None = None,
        boredom: str | None = None,
        requester: str | None = None,
    ):
        snapshot = state.store.snapshot()
        trace = _trace_or_404(snapshot, task)
        if trace.final_state.phase is not Phase.ACTIVE:
            raise HTTPException(
                status_code=_PHASE_MISMATCH,
                detail=f"task {task!r} is {trace.final_state.phase.value}, not Active",
            )

        context: dict[str, str] = {}
        for key, raw in (
            ("initiator", initiator),
            ("time_of_day", time),
            ("blockage", blockage),
            ("boredom", boredom),
        ):
            if raw is None:
                continue
            try:
                context[key] = CharacteristicItem(key, raw).value
            except ValueError:
                _bad_request(f"invalid {key} value {raw!r}")

        task_type = trace.descriptor.task_type
        rules = state.mined_rules(
            snapshot, task_type, config.min_support, config.min_confidence
        )
        applicable = [
            rule
            for rule in rules
            if all(
                item.value == context[item.key]
                for item in rule.antecedent
                if item.key in context
            )
        ]

        predicted: dict[str, str | None] = {m.value: None for m in Measure}
        for rule in applicable:  # already sorted best-first
            for item in rule.consequent:
                if predicted[item.measure.value] is None:
                    predicted[item.measure.value] = item.level.value

        focus = requester or trace.descriptor.performer_id
        graph = snapshot_graph(snapshot)
        sliced_edges = {
            edge: weight
            for edge, weight in graph.edges.items()
            if focus in edge
        }
        slice_nodes = {focus} | {p for edge in sliced_edges for p in edge}
        graph_slice = CommunicationGraph(
            nodes={p: graph.nodes.get(p) for p in slice_nodes},
            edges=sliced_edges,
        )

        return {
            "task_id": task,
            "task_type": task_type.value,
            "context": context,
            "rules": [
                rule_payload(rule, render_disruptiveness(rule, lexicon=state.lexicon).text)
                for rule in applicable
            ],
            "predicted_levels": predicted,
            "flags": {
                "blockage": context.get("blockage") == "yes",
                "boredom": context.get("boredom") == "yes",
            },
            "graph_slice": graph_payload(graph_slice),
        }

    # -- stage 2: while suspended -----------------------------------------

    @app.get("/suspension/{task}")
    def suspension_status(task: str):
        snapshot = state.store.snapshot()
        trace = _trace_or_404(snapshot, task)
        current = trace.final_state
        if current.phase not in (Phase.SUSPENDED, Phase.RESUMPTION_PENDING):
            raise HTTPException(
                status_code=_PHASE_MISMATCH,
                detail=f"task {task!r} is {current.phase.value}, not suspended",
            )

        now = state.clock()
        horizon = timedelta(seconds=config.trap_horizon_s)
        suspended_at = current.suspended_at
        elapsed = (now - suspended_at).total_seconds()
        trapped = detect_trap(trace, now, horizon)

        task_type = trace.descriptor.task_type
        base = _median_resumption_lag(state, snapshot, task_type)
        first_delay = base if base is not None else config.first_reminder_s
        schedule = [{"after_s": 0.0, "at": format_timestamp(suspended_at), "channel": "pin"}]
        delay = first_delay
        while delay < config.trap_horizon_s:
            schedule.append(
                {
                    "after_s": delay,
                    "at": format_timestamp(suspended_at + timedelta(seconds=delay)),
                    "channel": "popup",
                }
            )
            delay *= 2
        schedule.append(
            {
                "after_s": config.trap_horizon_s,
                "at": format_timestamp(suspended_at + horizon),
                "channel": "email",
            }
        )

        narrative = _episode_narrative(state, snapshot, trace)
        return {
            "task_id": task,
            "phase": current.phase.value,
            "fragments_so_far": current.fragment_index,
            "depth": current.depth,
            "suspended_at": format_timestamp(suspended_at),
            "elapsed_s": elapsed,
            "trap": trapped,
            "trap_horizon_s": config.trap_horizon_s,
            "reminders": {
                "policy": "median-resumption-lag, x2 backoff, capped at horizon",
                "first_delay_s": first_delay,
                "schedule": schedule,
            },
            "narrative": narrative,
        }

    # -- stage 3: resuming -------------------------------------------------

    @app.get("/resumption/{task}/cues")
    def resumption_cues(task: str):
        snapshot = state.store.snapshot()
        trace = _trace_or_404(snapshot, task)
        episode = _resumption_episode(trace)
        if episode is None:
            raise HTTPException(
                status_code=_PHASE_MISMATCH,
                detail=f"task {task!r} is not resuming",
            )

        task_type = trace.descriptor.task_type
        rules = state.sequence_rules(snapshot, task_type)
        order = recommend_order(task_type, rules)

        annotations = [
            {"at": format_timestamp(e.at), "text": e.annotations}
            for e in trace.events
            if e.annotations is not None
        ]
        thumbnails = [
            f"{task}#frag{index}"
            for index in range(1, trace.final_state.fragment_index + 1)
        ]
        payloads = {cue.value: [] for cue in CueType}
        payloads[CueType.ANNOTATION.value] = annotations
        payloads[CueType.THUMBNAIL.value] = thumbnails
        payloads[CueType.BEHAVIOR_GRAPH.value] = ["/graph/communication"]

        return {
            "task_id": task,
            "session_id": f"{task}#resume{episode}",
            "cues": [cue.value for cue in order],
            "payloads": payloads,
            "recall_estimate_s": config.recall_estimate_s,
            "rules": [
                sequence_rule_payload(
                    rule, render_cue_sequence(rule, task_type, lexicon=state.lexicon).text
                )
                for rule in rules
            ],
        }

    @app.post("/resumption/{task}/cue-visit", status_code=204)
    async def post_cue_visit(task: str, request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            _bad_request("body must be a JSON object")
        if not isinstance(body, dict) or "cue" not in body:
            _bad_request("body must be a JSON object with a 'cue' field")
        try:
            cue = CueType(body["cue"])
        except ValueError:
            _bad_request(f"unknown cue {body['cue']!r}")
        if "at" in body:
            try:
                at = parse_timestamp(body["at"])
            except MalformedLine as err:
                _bad_request(err.reason)
        else:
            at = state.clock()

        snapshot = state.store.snapshot()
        trace = _trace_or_404(snapshot, task)
        episode = _resumption_episode(trace)
        if episode is None:
            raise HTTPException(
                status_code=_PHASE_MISMATCH,
                detail=f"task {task!r} is not resuming",
            )
        visit = CueVisitRecord(f"{task}#resume{episode}", task, cue, at)
        report = state.store.ingest_records([visit])
        if report.rejected:
            raise HTTPException(status_code=_PHASE_MISMATCH, detail=report.rejected[0].reason)
        return Response(status_code=204)

    # -- shared views ------------------------------------------------------

    @app.get("/graph/communication")
    def communication(
        range_from: str | None = Query(default=None, alias="from"),
        range_to: str | None = Query(default=None, alias="to"),
    ):
        bounds = []
        for raw in (range_from, range_to):
            if raw is None:
                bounds.append(None)
                continue
            try:
                bounds.append(parse_timestamp(raw))
            except MalformedLine as err:
                _bad_request(err.reason)
        snapshot = state.store.snapshot()
        return graph_payload(snapshot_graph(snapshot, bounds[0], bounds[1]))

    @app.get("/patterns")
    def patterns(
        task_type: str,
        min_support: str | None = None,
        min_confidence: str | None = None,
    ):
        wanted = _parse_task_type(task_type)
        sup = _parse_fraction_param(min_support, config.min_support, "min_support")
        conf = _parse_fraction_param(min_confidence, config.min_confidence, "min_confidence")
        snapshot = state.store.snapshot()
        rules = state.mined_rules(snapshot, wanted, sup, conf)
        return {
            "task_type": wanted.value,
            "min_support": float(sup),
            "min_confidence": float(conf),
            "rules": [
                rule_payload(rule, render_disruptiveness(rule, lexicon=state.lexicon).text)
                for rule in rules
            ],
        }

    return app


def _median_resumption_lag(state: _AppState, snapshot: StoreSnapshot, task_type) -> float | None:
    try:
        raw = snapshot_raw_records(snapshot, task_type, state.config.tzinfo)
    except EmptyInput:
        return None
    lags = [r.resumption_lag_s for r in raw if r.resumption_lag_s is not None]
    if not lags:
        return None
    return float(statistics.median(lags))


def _episode_narrative(state: _AppState, snapshot: StoreSnapshot, trace) -> dict | None:
    episodes = episodes_of(trace)
    if not episodes or episodes[-1].resumed_at is not None:
        return None
    characteristics = episode_characteristics(
        episodes[-1], snapshot.descriptors, state.config.tzinfo
    )
    rules = state.mined_rules(
        snapshot,
        trace.descriptor.task_type,
        state.config.min_support,
        state.config.min_confidence,
    )
    for rule in rules:  # best-first
        if rule.antecedent <= characteristics:
            return rule_payload(
                rule, render_disruptiveness(rule, lexicon=state.lexicon).text
            )
    return None


def run(store: EventStore, config: ServiceConfig):
    """Serve the app on the configured port (blocking)."""
    import uvicorn

    uvicorn.run(create_app(store, config), host="127.0.0.1", port=config.port)
