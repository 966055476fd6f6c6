"""
Transaction scripts and the step machines that run them against a TM.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from sim import Invoke, Respond, StepMachine

from .base import TransactionalMemory
from .types import ABORTED, COMMITTED, Outcome, TObjectId, TOpKind, TxnId


@dataclass(frozen=True)
class TOpSpec:
    kind: TOpKind
    obj: TObjectId | None = None
    arg: Any = None

    @classmethod
    def read(cls, x: TObjectId) -> TOpSpec:
        return cls(TOpKind.READ, x)

    @classmethod
    def write(cls, x: TObjectId, value: Any) -> TOpSpec:
        return cls(TOpKind.WRITE, x, value)


TxnScript = tuple[TOpSpec, ...]


@dataclass
class TxnResult:
    txn: TxnId
    outcome: Outcome
    reads: dict[TObjectId, Any] = field(default_factory=dict)

    @property
    def committed(self) -> bool:
        return self.outcome is COMMITTED


class TxnIdAllocator:
    """Hands out k = 1, 2, ... across every process of one run"""

    def __init__(self, start: int = 1):
        self._next = itertools.count(start)

    def next(self, process: int) -> TxnId:
        return TxnId(next(self._next), process)


def transaction(tm: TransactionalMemory, txn: TxnId, script: Sequence[TOpSpec], commit: bool = True) -> StepMachine:
    """Run one transaction; returns a TxnResult.

    With commit=False the machine stops after the last scripted operation
    without invoking tryC.
    """
    tx = tm.begin(txn)
    reads: dict[TObjectId, Any] = {}
    for spec in script:
        yield Invoke(spec.kind.value, txn, spec.obj, spec.arg)
        if spec.kind is TOpKind.READ:
            result = yield from tm.read(tx, spec.obj)
        else:
            result = yield from tm.write(tx, spec.obj, spec.arg)
        yield Respond(result)
        if result is ABORTED:
            return TxnResult(txn, ABORTED, reads)
        if spec.kind is TOpKind.READ:
            reads.setdefault(spec.obj, result)
    if not commit:
        return TxnResult(txn, Outcome.OK, reads)

    yield Invoke(TOpKind.TRYC.value, txn)
    result = yield from tm.try_commit(tx)
    yield Respond(result)
    return TxnResult(txn, result, reads)


def process_machine(
    tm: TransactionalMemory,
    process: int,
    scripts: Iterable[Sequence[TOpSpec]],
    ids: TxnIdAllocator,
    retries: int = 0,
) -> StepMachine:
    """Run a process's transactions one after another.

    An aborted transaction is retried under a fresh id up to `retries` times.
    """
    results: list[TxnResult] = []
    for script in scripts:
        for _ in range(retries + 1):
            result = yield from transaction(tm, ids.next(process), script)
            results.append(result)
            if result.committed:
                break
    return results
