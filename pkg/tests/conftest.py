"""
Shared fixtures and negative-control TMs.

The control TMs break one property each so the checkers have something to
catch: AlwaysAbortTM aborts every transaction, VisibleReadTM bumps a shared
counter on every t-read and SpinningReadTM never returns from a t-read.
"""

import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sim import Access, Memory, PrimitiveOp  # noqa: E402
from tm import ABORTED, COMMITTED, TransactionalMemory, TxnState  # noqa: E402


class AlwaysAbortTM(TransactionalMemory):
    name = "always-abort"

    def _install(self, x, initial):
        self.cells[x] = self.memory.allocate(initial, owner=self.owner, name=f"{x}.value")

    def begin(self, txn):
        return TxnState(txn)

    def read(self, tx, x):
        return self._abort(tx)
        yield  # pragma: no cover

    def try_commit(self, tx):
        return self._abort(tx)
        yield  # pragma: no cover


class VisibleReadTM(TransactionalMemory):
    """Unsynchronized TM whose reads announce themselves on one shared counter"""

    name = "visible-read"

    def __init__(self, memory, tobjects, owner=-1):
        self.counter = memory.allocate(0, owner=owner, name="readers")
        super().__init__(memory, tobjects, owner)

    def _install(self, x, initial):
        self.cells[x] = self.memory.allocate(initial, owner=self.owner, name=f"{x}.value")

    def begin(self, txn):
        return TxnState(txn)

    def read(self, tx, x):
        if x in tx.writes:
            return tx.writes[x]
        value = yield Access(self.cells[x], PrimitiveOp.read(), f"{x}.value")
        yield Access(self.counter, PrimitiveOp.fetch_add(1), "readers")
        return value

    def try_commit(self, tx):
        for x, value in sorted(tx.writes.items()):
            yield Access(self.cells[x], PrimitiveOp.write(value), f"{x}.value")
        return COMMITTED


class SpinningReadTM(TransactionalMemory):
    """Reads wait for a flag nobody ever sets"""

    name = "spinning-read"

    def __init__(self, memory, tobjects, owner=-1):
        self.flag = memory.allocate(0, owner=owner, name="flag")
        super().__init__(memory, tobjects, owner)

    def _install(self, x, initial):
        self.cells[x] = self.memory.allocate(initial, owner=self.owner, name=f"{x}.value")

    def begin(self, txn):
        return TxnState(txn)

    def read(self, tx, x):
        while (yield Access(self.flag, PrimitiveOp.read(), "flag")) == 0:
            pass
        return ABORTED

    def try_commit(self, tx):
        return COMMITTED
        yield  # pragma: no cover


@pytest.fixture
def memory():
    """Two objects, b0 owned by p0 and b1 owned by p1, all three models"""
    mem = Memory()
    mem.add_object(0, 0, owner=0)
    mem.add_object(1, 0, owner=1)
    return mem


@pytest.fixture
def tmp_report(tmp_path):
    return tmp_path / "report.csv"
