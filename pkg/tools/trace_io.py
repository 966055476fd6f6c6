"""
Reading and writing traces.

An input trace is either a history (a JSON array of t-operations, optionally
wrapped as {"initial": ..., "history": [...]}) or an execution log (JSON
lines, starting with a meta record). Empty input is the empty execution.
"""

from __future__ import annotations

import json
from pathlib import Path

from sim import Execution
from sim.values import to_jsonable
from tm import History, MalformedHistoryError, TxnId


def write_execution_log(execution: Execution, path: str | Path) -> None:
    Path(path).write_text(execution.dumps(), encoding="utf-8")


def parse_execution_log(text: str) -> Execution:
    return Execution.from_json_lines(text.splitlines(), txn_factory=TxnId)


def read_execution_log(path: str | Path) -> Execution:
    return parse_execution_log(Path(path).read_text(encoding="utf-8"))


def history_document(history: History) -> dict:
    return {"initial": {x: to_jsonable(v) for x, v in history.initial.items()}, "history": history.to_json()}


def write_history(history: History, path: str | Path) -> None:
    Path(path).write_text(json.dumps(history_document(history), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def parse_trace(text: str) -> History | Execution:
    stripped = text.strip()
    if not stripped:
        return Execution(records=())
    try:
        data = json.loads(stripped)
    except json.JSONDecodeError:
        return parse_execution_log(stripped)

    if isinstance(data, list):
        return History.from_json(data)
    if isinstance(data, dict) and "history" in data:
        return History.from_json(data["history"], data.get("initial"))
    if isinstance(data, dict) and "record" in data:
        return parse_execution_log(stripped)
    raise MalformedHistoryError("expected a history array, a {initial, history} object or an execution log")


def load_trace(path: str | Path) -> History | Execution:
    return parse_trace(Path(path).read_text(encoding="utf-8"))
