"""
SP1-TM: single-object TM built on one CAS cell per t-object.

The cell holds (value, version). Readers validate the version at commit;
writers commit with one CAS that installs the new value and bumps the
version, so concurrent transactions on X abort only when another one wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from sim import Access, BaseObjectId, PrimitiveOp

from .base import TOpFragment, TransactionalMemory, TxnState
from .errors import TMUsageError
from .types import ABORTED, COMMITTED, TObjectId, TxnId


@dataclass
class SP1TxnState(TxnState):
    obj: TObjectId | None = None
    observed: tuple | None = None


class SP1TM(TransactionalMemory):
    name = "sp1"

    def _install(self, x, initial):
        self.cells[x] = self.memory.allocate((initial, 0), owner=self.owner, name=f"{x}.cell")

    def begin(self, txn: TxnId) -> SP1TxnState:
        return SP1TxnState(txn)

    def _touch(self, tx: SP1TxnState, x: TObjectId) -> None:
        if tx.obj is None:
            tx.obj = x
        elif tx.obj != x:
            raise TMUsageError(f"{tx.txn} touched {x} after {tx.obj}; sp1 transactions access one t-object")

    def read(self, tx: SP1TxnState, x: TObjectId) -> TOpFragment:
        self._touch(tx, x)
        if tx.dead:
            return ABORTED
        if x in tx.writes:
            return tx.writes[x]
        if tx.observed is None:
            tx.observed = tuple((yield Access(self.cells[x], PrimitiveOp.read(), f"{x}.cell")))
        return tx.observed[0]

    def write(self, tx: SP1TxnState, x: TObjectId, value: Any) -> TOpFragment:
        self._touch(tx, x)
        return (yield from super().write(tx, x, value))

    def try_commit(self, tx: SP1TxnState) -> TOpFragment:
        if tx.dead:
            return ABORTED
        if tx.obj is None:
            return COMMITTED
        cell = self.cells[tx.obj]
        if not tx.writes:
            current = yield Access(cell, PrimitiveOp.read(), f"{tx.obj}.cell")
            return COMMITTED if tuple(current) == tx.observed else self._abort(tx)

        if tx.observed is None:
            tx.observed = tuple((yield Access(cell, PrimitiveOp.read(), f"{tx.obj}.cell")))
        value, version = tx.observed
        installed = yield Access(cell, PrimitiveOp.cas(tx.observed, (tx.writes[tx.obj], version + 1)), f"{tx.obj}.cell")
        return COMMITTED if installed else self._abort(tx)
