"""Batch frontend: ingest logs, run the miners, export views, serve HTTP.

Exit codes: 0 success, 1 validation problem (bad arguments, nothing to
mine), 2 I/O problem (unreadable files, corrupt store).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import ConfigError, ServiceConfig, as_fraction, load_config
from .cue_mining import mine_sequences, recommend_order
from .logfmt import MalformedLine, parse_timestamp
from .narrative import render_cue_sequence, render_disruptiveness
from .pattern_mining import EmptyInput, MiningParams, mine_records
from .service import graph_payload, rule_payload, sequence_rule_payload
from .store import EventStore, StoreCorruption
from .task_model import TaskType

DEFAULT_STORE = "./switchlens.db"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    # Argument problems are validation failures, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ValidationError(message)


class _ValidationError(Exception):
    pass


class _IOError(Exception):
    pass


def _fraction_arg(raw: str) -> Fraction:
    try:
        value = as_fraction(raw)
    except ConfigError:
        raise argparse.ArgumentTypeError(f"not a rational number: {raw!r}")
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {raw}")
    return value


def _task_type_arg(raw: str) -> TaskType:
    try:
        return TaskType(raw)
    except ValueError:
        choices = ", ".join(t.value for t in TaskType)
        raise argparse.ArgumentTypeError(f"unknown task type {raw!r} (choices: {choices})")


def _timestamp_arg(raw: str):
    try:
        return parse_timestamp(raw)
    except MalformedLine as err:
        raise argparse.ArgumentTypeError(err.reason)


def build_parser() -> _Parser:
    parser = _Parser(prog="switchlens", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_store(p):
        p.add_argument("--store", default=DEFAULT_STORE, help=f"store path (default {DEFAULT_STORE})")

    p = sub.add_parser("ingest", help="ingest a log file into the store")
    p.add_argument("--input", required=True, help="log file, one JSON record per line")
    add_store(p)

    p = sub.add_parser("mine", help="mine disruptiveness rules for one task type")
    p.add_argument("--task-type", required=True, type=_task_type_arg)
    p.add_argument("--min-support", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--min-confidence", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--format", choices=("text", "json"), default="text")
    add_store(p)

    p = sub.add_parser("cues", help="mine resumption cue-sequence rules")
    p.add_argument("--min-support", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--task-type", type=_task_type_arg, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    add_store(p)

    p = sub.add_parser("graph", help="export the communication graph")
    p.add_argument("--from", dest="range_from", type=_timestamp_arg, default=None)
    p.add_argument("--to", dest="range_to", type=_timestamp_arg, default=None)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    add_store(p)

    p = sub.add_parser("export", help="write the store back out as log lines")
    p.add_argument("--output", default="-", help="output path, - for stdout")
    add_store(p)

    p = sub.add_parser("serve", help="run the HTTP advisory service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--store", default=None, help="store path (overrides config)")

    return parser


def _open_store(path: str) -> EventStore:
    try:
        return EventStore(path)
    except StoreCorruption as err:
        raise _IOError(str(err))
    except OSError as err:
        raise _IOError(f"cannot open store: {err}")


def _cmd_ingest(args) -> int:
    store = _open_store(args.store)
    try:
        with open(args.input, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise _IOError(f"cannot read {args.input}: {err}")
    try:
        report = store.ingest(lines)
    except OSError as err:
        raise _IOError(f"cannot write store {args.store}: {err}")
    print(f"accepted {report.accepted}, duplicates {report.duplicates}, rejected {len(report.rejected)}")
    for rejection in report.rejected:
        print(f"  line {rejection.line_no}: {rejection.reason}")
    return EXIT_OK


def _cmd_mine(args) -> int:
    store = _open_store(args.store)
    try:
        records = store.mining_records(args.task_type)
    except EmptyInput:
        records = []
    if not records:
        raise _ValidationError("no records for task type")
    params = MiningParams(
        min_support=args.min_support,
        min_confidence=args.min_confidence,
        task_type=args.task_type,
    )
    rules = mine_records(records, params)
    if args.format == "json":
        payload = {
            "task_type": args.task_type.value,
            "min_support": float(args.min_support),
            "min_confidence": float(args.min_confidence),
            "rules": [rule_payload(r, render_disruptiveness(r).text) for r in rules],
        }
        print(json.dumps(payload, indent=2))
    else:
        if not rules:
            print("no rules at these thresholds")
        for rule in rules:
            print(render_disruptiveness(rule).text)
    return EXIT_OK


def _cmd_cues(args) -> int:
    store = _open_store(args.store)
    sessions = store.cue_sessions(args.task_type)
    if not sessions:
        raise _ValidationError("no cue sessions in store")
    rules = mine_sequences(sessions, min_support=args.min_support, max_len=args.max_len)
    if args.format == "json":
        payload = {
            "task_type": args.task_type.value if args.task_type else None,
            "min_support": float(args.min_support),
            "rules": [
                sequence_rule_payload(
                    r,
                    render_cue_sequence(r, args.task_type).text if args.task_type else "",
                )
                for r in rules
            ],
        }
        if args.task_type:
            payload["recommended_order"] = [
                c.value for c in recommend_order(args.task_type, rules)
            ]
        print(json.dumps(payload, indent=2))
    else:
        if not rules:
            print("no sequence rules at this support")
        for rule in rules:
            if args.task_type:
                print(render_cue_sequence(rule, args.task_type).text)
            else:
                arrow = " -> ".join(c.value for c in rule.sequence)
                print(f"{arrow} (support {float(rule.support):.2f}, confidence {float(rule.confidence):.2f})")
        if args.task_type:
            order = recommend_order(args.task_type, rules)
            print("recommended order: " + ", ".join(c.value for c in order))
    return EXIT_OK


def _dot_graph(payload: dict) -> str:
    lines = ["digraph communication {"]
    for node in payload["nodes"]:
        person_id = node["person_id"]
        if node["name"]:
            label = f"{node['name']} ({node['role']})" if node["role"] else node["name"]
        else:
            label = person_id
        lines.append(f'  "{person_id}" [label="{label}"];')
    for edge in payload["edges"]:
        lines.append(
            f'  "{edge["from"]}" -> "{edge["to"]}" [weight={edge["weight"]}, label="{edge["weight"]}"];'
        )
    lines.append("}")
    return "\n".join(lines)


def _cmd_graph(args) -> int:
    store = _open_store(args.store)
    graph = store.communication_graph(args.range_from, args.range_to)
    payload = graph_payload(graph)
    if args.format == "dot":
        print(_dot_graph(payload))
    else:
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_export(args) -> int:
    store = _open_store(args.store)
    lines = store.export()
    if args.output == "-":
        for line in lines:
            print(line)
        return EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")
    except OSError as err:
        raise _IOError(f"cannot write {args.output}: {err}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as err:
        raise _ValidationError(str(err))
    if args.port is not None:
        from dataclasses import replace

        config = replace(config, port=args.port)
    store_path = args.store or config.store_path or DEFAULT_STORE
    store = _open_store(store_path)

    from .service import run

    run(store, config)
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "mine": _cmd_mine,
    "cues": _cmd_cues,
    "graph": _cmd_graph,
    "export": _cmd_export,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _ValidationError as err:
        print(f"switchlens: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except _IOError as err:
        print(f"switchlens: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
