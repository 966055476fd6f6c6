"""
Executions: the immutable record of one simulated run, plus JSON-lines IO and replay.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Hashable, Iterable, Mapping

from .memory import BaseObjectId, Marker, MarkerKind, Memory, Record, RmwEvent
from .primitives import PrimitiveKind, PrimitiveOp
from .rmr import ALL_MODELS, MemoryModel
from .values import from_jsonable, to_jsonable

TxnFactory = Callable[[int, int], Hashable]


@dataclass(frozen=True)
class Execution:
    records: tuple[Record, ...]
    initial: Mapping[BaseObjectId, Any] = field(default_factory=dict)
    owners: Mapping[BaseObjectId, int] = field(default_factory=dict)
    tobjects: Mapping[str, Any] = field(default_factory=dict)
    names: Mapping[BaseObjectId, str] = field(default_factory=dict)
    decisions: tuple[int, ...] = ()
    truncated: bool = False
    models: tuple[MemoryModel, ...] = ALL_MODELS

    @classmethod
    def from_memory(cls, memory: Memory, decisions: Iterable[int] = (), truncated: bool = False) -> Execution:
        return cls(
            records=tuple(memory.records),
            initial=memory.initial_values,
            owners=memory.owners,
            tobjects=dict(memory.tobjects),
            names=dict(memory.names),
            decisions=tuple(decisions),
            truncated=truncated,
            models=memory.models,
        )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def events(self) -> list[RmwEvent]:
        return [r for r in self.records if isinstance(r, RmwEvent)]

    @property
    def markers(self) -> list[Marker]:
        return [r for r in self.records if isinstance(r, Marker)]

    def prefix(self, length: int) -> Execution:
        return replace(self, records=self.records[:length], decisions=(), truncated=False)

    def name_of(self, obj: BaseObjectId) -> str:
        return self.names.get(obj, f"b{obj}")

    def meta(self) -> dict:
        return {
            "record": "meta",
            "initial": [[obj, to_jsonable(v)] for obj, v in sorted(self.initial.items())],
            "owners": [[obj, owner] for obj, owner in sorted(self.owners.items())],
            "tobjects": {x: to_jsonable(v) for x, v in self.tobjects.items()},
            "names": [[obj, name] for obj, name in sorted(self.names.items())],
            "models": [m.value for m in self.models],
            "decisions": list(self.decisions),
            "truncated": self.truncated,
        }

    def to_json_lines(self) -> list[str]:
        lines = [json.dumps(self.meta(), ensure_ascii=False)]
        lines.extend(json.dumps(r.to_json(), ensure_ascii=False) for r in self.records)
        return lines

    def dumps(self) -> str:
        return "\n".join(self.to_json_lines()) + "\n"

    @classmethod
    def from_json_lines(cls, lines: Iterable[str], txn_factory: TxnFactory | None = None) -> Execution:
        meta: dict = {}
        records: list[Record] = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            kind = data.get("record")
            if kind == "meta":
                meta = data
            elif kind == "rmw":
                records.append(_rmw_from_json(data, txn_factory))
            else:
                records.append(_marker_from_json(data, txn_factory))
        return cls(
            records=tuple(records),
            initial={BaseObjectId(o): from_jsonable(v) for o, v in meta.get("initial", [])},
            owners={BaseObjectId(o): p for o, p in meta.get("owners", [])},
            tobjects={x: from_jsonable(v) for x, v in meta.get("tobjects", {}).items()},
            names={BaseObjectId(o): n for o, n in meta.get("names", [])},
            decisions=tuple(meta.get("decisions", [])),
            truncated=bool(meta.get("truncated", False)),
            models=tuple(MemoryModel(m) for m in meta.get("models", [m.value for m in ALL_MODELS])),
        )


def _txn(data: dict, txn_factory: TxnFactory | None) -> Hashable | None:
    k = data.get("txn")
    if k is None:
        return None
    return txn_factory(k, data["process"]) if txn_factory else k


def _rmw_from_json(data: dict, txn_factory: TxnFactory | None) -> RmwEvent:
    primitive = PrimitiveOp(PrimitiveKind(data["primitive"]), from_jsonable(list(data.get("operands", []))))
    return RmwEvent(
        seq=data["seq"],
        process=data["process"],
        object=BaseObjectId(data["object"]),
        primitive=primitive,
        response=from_jsonable(data.get("response")),
        before=from_jsonable(data.get("before")),
        after=from_jsonable(data.get("after")),
        txn=_txn(data, txn_factory),
        top=data.get("top"),
        label=data.get("label"),
        rmr=data.get("rmr", {}),
    )


def _marker_from_json(data: dict, txn_factory: TxnFactory | None) -> Marker:
    outcome = from_jsonable(data.get("outcome"))
    return Marker(
        seq=data["seq"],
        process=data["process"],
        kind=MarkerKind(data["record"]),
        op=data.get("op"),
        txn=_txn(data, txn_factory),
        top=data.get("top"),
        obj=data.get("tobject"),
        arg=from_jsonable(data.get("arg")),
        outcome=outcome,
        label=data.get("label"),
    )


def replay_execution(execution: Execution) -> list[str]:
    """Re-apply every recorded event from the initial configuration.

    Returns a description of each event whose response, new state or RMR
    charge differs from the recording; an empty list means the log is sound.
    """
    memory = Memory(execution.models)
    for obj, initial in sorted(execution.initial.items()):
        memory.add_object(obj, initial, owner=execution.owners.get(obj))

    mismatches = []
    for event in execution.events:
        again = memory.apply(event.process, event.object, event.primitive, txn=event.txn, top=event.top)
        if again.response != event.response or again.after != event.after:
            mismatches.append(
                f"seq {event.seq}: {event.primitive} on {execution.name_of(event.object)} "
                f"recorded {event.response!r}/{event.after!r}, replayed {again.response!r}/{again.after!r}"
            )
        elif event.rmr and dict(again.rmr) != dict(event.rmr):
            mismatches.append(f"seq {event.seq}: rmr recorded {dict(event.rmr)}, replayed {dict(again.rmr)}")
    return mismatches
