"""
TM histories: the projection of an execution onto t-operation invocations and
responses, plus the structural predicates every checker builds on (data sets,
real-time order, conflicts, step contention, quiescence).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

from sim import Execution, Marker, MarkerKind, RmwEvent
from sim.values import from_jsonable, to_jsonable

from .errors import MalformedHistoryError, UnknownTransactionError
from .types import ABORTED, COMMITTED, OK, TObjectId, TOpKind, TxnId, TxnStatus, normalize_outcome

DEFAULT_INITIAL = 0


@dataclass
class TOp:
    txn: TxnId
    kind: TOpKind
    obj: TObjectId | None
    arg: Any
    inv_index: int
    resp_index: int | None = None
    outcome: Any = None
    top: int | None = None

    @property
    def pending(self) -> bool:
        return self.resp_index is None

    @property
    def aborted(self) -> bool:
        return not self.pending and self.outcome is ABORTED

    def to_json(self) -> dict:
        return {
            "txn": self.txn.k,
            "process": self.txn.process,
            "kind": self.kind.value,
            "object": self.obj,
            "arg": to_jsonable(self.arg),
            "outcome": None if self.pending else to_jsonable(self.outcome),
            "invSeq": self.inv_index,
            "respSeq": self.resp_index,
        }


@dataclass
class TxnView:
    txn: TxnId
    ops: list[TOp]
    first_index: int
    last_index: int

    @property
    def rset(self) -> frozenset[TObjectId]:
        return frozenset(op.obj for op in self.ops if op.kind is TOpKind.READ)

    @property
    def wset(self) -> frozenset[TObjectId]:
        return frozenset(op.obj for op in self.ops if op.kind is TOpKind.WRITE)

    @property
    def dset(self) -> frozenset[TObjectId]:
        return self.rset | self.wset

    @property
    def read_only(self) -> bool:
        return not self.wset

    @property
    def updating(self) -> bool:
        return bool(self.wset)

    @property
    def status(self) -> TxnStatus:
        last = self.ops[-1]
        if last.pending:
            return TxnStatus.T_INCOMPLETE
        if last.outcome is ABORTED:
            return TxnStatus.ABORTED
        if last.kind is TOpKind.TRYC and last.outcome is COMMITTED:
            return TxnStatus.COMMITTED
        return TxnStatus.T_INCOMPLETE

    @property
    def committed(self) -> bool:
        return self.status is TxnStatus.COMMITTED

    @property
    def aborted(self) -> bool:
        return self.status is TxnStatus.ABORTED

    @property
    def t_complete(self) -> bool:
        return self.status is not TxnStatus.T_INCOMPLETE

    @property
    def complete(self) -> bool:
        """No invoked t-operation is still waiting for its response"""
        return not self.ops[-1].pending

    @property
    def commit_pending(self) -> bool:
        last = self.ops[-1]
        return last.kind is TOpKind.TRYC and last.pending

    @property
    def reads_returned(self) -> dict[TObjectId, Any]:
        returned = {}
        for op in self.ops:
            if op.kind is TOpKind.READ and not op.pending and op.outcome is not ABORTED:
                returned.setdefault(op.obj, op.outcome)
        return returned


@dataclass(frozen=True)
class History:
    ops: tuple[TOp, ...]
    views: Mapping[TxnId, TxnView]
    initial: Mapping[TObjectId, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return sum(1 if op.pending else 2 for op in self.ops)

    def txns(self) -> list[TxnId]:
        return sorted(self.views, key=lambda t: (self.views[t].first_index, t.k))

    def view(self, txn: TxnId) -> TxnView:
        try:
            return self.views[txn]
        except KeyError:
            raise UnknownTransactionError(f"{txn} is not in the history") from None

    def initial_value(self, x: TObjectId) -> Any:
        return self.initial.get(x, DEFAULT_INITIAL)

    def to_json(self) -> list[dict]:
        return [op.to_json() for op in self.ops]

    @classmethod
    def from_ops(
        cls,
        ops: Iterable[TOp],
        initial: Mapping[TObjectId, Any] | None = None,
        extents: Mapping[TxnId, tuple[int, int]] | None = None,
    ) -> History:
        ordered = sorted(ops, key=lambda op: op.inv_index)
        by_txn: dict[TxnId, list[TOp]] = {}
        for op in ordered:
            by_txn.setdefault(op.txn, []).append(op)

        processes: dict[int, int] = {}
        for txn in by_txn:
            if processes.setdefault(txn.k, txn.process) != txn.process:
                raise MalformedHistoryError(f"T{txn.k} runs on processes {processes[txn.k]} and {txn.process}")

        views = {}
        for txn, txn_ops in by_txn.items():
            _check_well_formed(txn, txn_ops)
            first = txn_ops[0].inv_index
            last = max(op.inv_index if op.pending else op.resp_index for op in txn_ops)
            if extents and txn in extents:
                first, last = min(first, extents[txn][0]), max(last, extents[txn][1])
            views[txn] = TxnView(txn, txn_ops, first, last)
        return cls(tuple(ordered), views, dict(initial or {}))

    @classmethod
    def from_json(cls, data: list[dict], initial: Mapping[TObjectId, Any] | None = None) -> History:
        ops = []
        for entry in data:
            try:
                txn = TxnId(int(entry["txn"]), int(entry.get("process", 0)))
                kind = TOpKind(entry["kind"])
                resp = entry.get("respSeq")
                outcome = entry.get("outcome")
                ops.append(
                    TOp(
                        txn=txn,
                        kind=kind,
                        obj=entry.get("object"),
                        arg=from_jsonable(entry.get("arg")),
                        inv_index=int(entry["invSeq"]),
                        resp_index=None if resp is None else int(resp),
                        outcome=None if resp is None else normalize_outcome(from_jsonable(outcome)),
                    )
                )
            except (KeyError, TypeError, ValueError) as e:
                raise MalformedHistoryError(f"bad history entry {entry!r}: {e}") from e
        return cls.from_ops(ops, {x: from_jsonable(v) for x, v in (initial or {}).items()})


def _check_well_formed(txn: TxnId, ops: list[TOp]) -> None:
    for op in ops:
        if op.kind is TOpKind.TRYC:
            allowed = op.pending or op.outcome in (COMMITTED, ABORTED)
        elif op.kind is TOpKind.WRITE:
            allowed = op.pending or op.outcome in (OK, ABORTED)
        else:
            allowed = op.pending or op.outcome not in (OK, COMMITTED)
        if not allowed:
            raise MalformedHistoryError(f"{txn}: {op.kind.value} cannot return {op.outcome!r}")
        if not op.pending and op.resp_index < op.inv_index:
            raise MalformedHistoryError(f"{txn}: response precedes its invocation")
    for earlier, later in zip(ops, ops[1:]):
        if earlier.pending or earlier.resp_index > later.inv_index:
            raise MalformedHistoryError(f"{txn}: overlapping t-operations")
        if earlier.outcome is ABORTED or earlier.kind is TOpKind.TRYC:
            raise MalformedHistoryError(f"{txn}: events after its commit or abort")


def derive_history(execution: Execution) -> History:
    """Project an execution onto its t-operations"""
    open_ops: dict[int, TOp] = {}
    ops: list[TOp] = []
    extents: dict[TxnId, list[int]] = {}
    terminated: set = set()

    for index, record in enumerate(execution.records):
        txn = record.txn
        if txn is None:
            continue
        if txn in terminated:
            raise MalformedHistoryError(f"{txn}: event at {index} after its commit or abort")
        span = extents.setdefault(txn, [index, index])
        span[1] = index

        if isinstance(record, RmwEvent):
            if record.top not in open_ops:
                raise MalformedHistoryError(f"{txn}: event at {index} outside any t-operation")
        elif isinstance(record, Marker) and record.kind is MarkerKind.INVOKE:
            if any(op.txn == txn for op in open_ops.values()):
                raise MalformedHistoryError(f"{txn}: overlapping t-operations at {index}")
            op = TOp(txn, TOpKind(record.op), record.obj, record.arg, index, top=record.top)
            open_ops[record.top] = op
            ops.append(op)
        elif isinstance(record, Marker) and record.kind is MarkerKind.RESPOND:
            op = open_ops.pop(record.top, None)
            if op is None:
                raise MalformedHistoryError(f"{txn}: response at {index} without an invocation")
            op.resp_index = index
            op.outcome = normalize_outcome(record.outcome)
            if op.outcome is ABORTED or op.kind is TOpKind.TRYC:
                terminated.add(txn)

    return History.from_ops(ops, execution.tobjects, {t: (s[0], s[1]) for t, s in extents.items()})


def real_time_precedes(history: History, a: TxnId, b: TxnId) -> bool:
    va, vb = history.view(a), history.view(b)
    return a != b and va.t_complete and va.last_index < vb.first_index


def concurrent(history: History, a: TxnId, b: TxnId) -> bool:
    return a != b and not real_time_precedes(history, a, b) and not real_time_precedes(history, b, a)


def conflicts(history: History, a: TxnId, b: TxnId) -> frozenset[TObjectId]:
    va, vb = history.view(a), history.view(b)
    if a == b:
        return frozenset()
    return (va.dset & vb.dset) & (va.wset | vb.wset)


def step_contention_free(execution: Execution, scope: TxnId | int | None = None) -> bool:
    """Whether the scoped records are contiguous (no-op records ignored).

    scope None checks every transaction, a TxnId one transaction and an int
    one t-operation, named by its invocation seq.
    """
    records = [r for r in execution.records if not (isinstance(r, Marker) and r.kind is MarkerKind.NOOP)]
    if scope is None:
        return all(step_contention_free(execution, txn) for txn in {r.txn for r in records if r.txn is not None})

    if isinstance(scope, TxnId):
        positions = [i for i, r in enumerate(records) if r.txn == scope]
    else:
        positions = [i for i, r in enumerate(records) if r.top == scope and r.txn is not None]
    if not positions:
        raise UnknownTransactionError(f"nothing in the execution belongs to {scope}")
    return positions[-1] - positions[0] + 1 == len(positions)


class Quiescence(str, Enum):
    QUIESCENT = "quiescent"
    T_QUIESCENT = "t-quiescent"


def quiescence(execution: Execution, kind: Quiescence | str = Quiescence.QUIESCENT) -> bool:
    views = derive_history(execution).views.values()
    if Quiescence(kind) is Quiescence.QUIESCENT:
        return all(v.complete for v in views)
    return all(v.t_complete for v in views)
