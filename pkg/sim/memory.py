"""
Simulated shared memory: base objects, primitive application and the event log.

A Memory owns the current value of every base object, the LL links, one RMR
ledger per active memory model and the append-only list of records (rmw
events and t-operation markers) that becomes an Execution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Hashable, Iterable, Mapping, NewType, Sequence

from .errors import DuplicateObjectError, MissingOwnershipError, UnknownObjectError
from .primitives import PrimitiveKind, PrimitiveOp
from .rmr import ALL_MODELS, MemoryModel, RmrFilter, RmrLedger, make_ledger
from .values import to_jsonable

logger = logging.getLogger(__name__)

BaseObjectId = NewType("BaseObjectId", int)


def txn_key(txn: Any) -> Any:
    """JSON form of a transaction identifier (its k when it has one)"""
    return getattr(txn, "k", txn)


@dataclass(frozen=True)
class RmwEvent:
    seq: int
    process: int
    object: BaseObjectId
    primitive: PrimitiveOp
    response: Any
    before: Any
    after: Any
    txn: Hashable | None = None
    top: int | None = None
    label: str | None = None
    rmr: Mapping[str, int] = field(default_factory=dict)

    @property
    def tm(self) -> bool:
        return self.txn is not None

    @property
    def nontrivial(self) -> bool:
        return self.primitive.nontrivial

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "record": "rmw",
            "process": self.process,
            "txn": txn_key(self.txn),
            "top": self.top,
            "object": self.object,
            "primitive": self.primitive.kind.value,
            "operands": to_jsonable(self.primitive.operands),
            "response": to_jsonable(self.response),
            "before": to_jsonable(self.before),
            "after": to_jsonable(self.after),
            "label": self.label,
            "rmr": dict(self.rmr),
        }


class MarkerKind(str, Enum):
    INVOKE = "invoke"
    RESPOND = "respond"
    MARK = "mark"
    NOOP = "noop"


@dataclass(frozen=True)
class Marker:
    """A zero-cost record: operation invocation/response, CS marker or no-op"""

    seq: int
    process: int
    kind: MarkerKind
    op: str | None = None
    txn: Hashable | None = None
    top: int | None = None
    obj: Any = None
    arg: Any = None
    outcome: Any = None
    label: str | None = None

    @property
    def tm(self) -> bool:
        return self.txn is not None

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "record": self.kind.value,
            "process": self.process,
            "txn": txn_key(self.txn),
            "top": self.top,
            "op": self.op,
            "tobject": self.obj,
            "arg": to_jsonable(self.arg),
            "outcome": to_jsonable(self.outcome),
            "label": self.label,
        }


Record = RmwEvent | Marker


@dataclass(frozen=True)
class Configuration:
    object_values: Mapping[BaseObjectId, Any]
    process_states: Mapping[int, Any]


class Memory:
    def __init__(self, models: Iterable[MemoryModel | str] = ALL_MODELS):
        self.models = tuple(MemoryModel(m) for m in models)
        self.ledgers: dict[MemoryModel, RmrLedger] = {m: make_ledger(m) for m in self.models}
        self.records: list[Record] = []
        self.tobjects: dict[str, Any] = {}
        self.names: dict[BaseObjectId, str] = {}
        self._values: dict[BaseObjectId, Any] = {}
        self._initial: dict[BaseObjectId, Any] = {}
        self._owners: dict[BaseObjectId, int] = {}
        self._links: dict[BaseObjectId, set[int]] = {}

    @property
    def dsm(self) -> bool:
        return MemoryModel.DSM in self.ledgers

    def add_object(self, obj: int, initial: Any, owner: int | None = None, name: str | None = None) -> BaseObjectId:
        obj = BaseObjectId(obj)
        if obj in self._values:
            raise DuplicateObjectError(f"base object {obj} already exists")
        if owner is None and self.dsm:
            raise MissingOwnershipError(f"base object {obj} ({name or 'unnamed'}) needs a DSM owner")
        self._values[obj] = initial
        self._initial[obj] = initial
        if owner is not None:
            self._owners[obj] = owner
        if name:
            self.names[obj] = name
        for ledger in self.ledgers.values():
            ledger.register(obj, owner)
        return obj

    def allocate(self, initial: Any, owner: int | None = None, name: str | None = None) -> BaseObjectId:
        """Add an object under the next free id"""
        next_id = max(self._values, default=-1) + 1
        return self.add_object(next_id, initial, owner=owner, name=name)

    def value(self, obj: BaseObjectId) -> Any:
        try:
            return self._values[obj]
        except KeyError:
            raise UnknownObjectError(f"unknown base object {obj}") from None

    def owner(self, obj: BaseObjectId) -> int | None:
        return self._owners.get(obj)

    @property
    def initial_values(self) -> dict[BaseObjectId, Any]:
        return dict(self._initial)

    @property
    def owners(self) -> dict[BaseObjectId, int]:
        return dict(self._owners)

    def apply(
        self,
        process: int,
        obj: BaseObjectId,
        primitive: PrimitiveOp,
        *,
        txn: Hashable | None = None,
        top: int | None = None,
        label: str | None = None,
    ) -> RmwEvent:
        before = self.value(obj)
        links = self._links.setdefault(obj, set())
        after, response = primitive.apply(before, linked=process in links)
        self._values[obj] = after

        if primitive.kind is PrimitiveKind.LL:
            links.add(process)
        elif primitive.kind is PrimitiveKind.SC:
            links.discard(process)
        if primitive.modifies(response):
            links.clear()

        rmr = {
            ledger.model.value: ledger.charge(process, obj, primitive.nontrivial, txn is not None)
            for ledger in self.ledgers.values()
        }
        event = RmwEvent(
            seq=len(self.records),
            process=process,
            object=obj,
            primitive=primitive,
            response=response,
            before=before,
            after=after,
            txn=txn,
            top=top,
            label=label,
            rmr=rmr,
        )
        self.records.append(event)
        logger.debug("p%s %s on %s -> %r", process, primitive, label or obj, response)
        return event

    def record_marker(self, process: int, kind: MarkerKind, **fields: Any) -> Marker:
        marker = Marker(seq=len(self.records), process=process, kind=kind, **fields)
        self.records.append(marker)
        return marker

    def state_key(self) -> tuple:
        return tuple(self._values.items())

    def configuration(self, process_states: Mapping[int, Any] | None = None) -> Configuration:
        return Configuration(dict(self._values), dict(process_states or {}))

    def processes(self) -> list[int]:
        seen = {r.process for r in self.records}
        seen.update(p for p in self._owners.values() if p >= 0)
        return sorted(seen)

    def rmr_report(self, flt: RmrFilter | str = RmrFilter.ALL) -> dict[int, dict[str, int]]:
        flt = RmrFilter(flt)
        return {
            p: {ledger.model.value: ledger.count(p, flt) for ledger in self.ledgers.values()}
            for p in self.processes()
        }


def create_memory(
    objects: Sequence[tuple[int, Any]],
    dsm_ownership: Mapping[int, int] | None = None,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
) -> Memory:
    """Build a memory in its initial configuration"""
    memory = Memory(models)
    ownership = dsm_ownership or {}
    for obj, initial in objects:
        memory.add_object(obj, initial, owner=ownership.get(obj))
    return memory


def apply_primitive(memory: Memory, process: int, obj: BaseObjectId, primitive: PrimitiveOp, **tags: Any) -> RmwEvent:
    return memory.apply(process, obj, primitive, **tags)


def rmr_report(memory: Memory, flt: RmrFilter | str = RmrFilter.ALL) -> dict[int, dict[str, int]]:
    return memory.rmr_report(flt)
