"""
REF-TM: versioned-lock TM with invisible reads and incremental validation.

Each t-object X owns two base objects: a value cell and a lock word
(version, locked, owner). A t-read samples lock, value and lock again, then
re-reads the lock word of every earlier read-set entry. Writes are buffered
and published in tryC under CAS-acquired locks taken in t-object order.

LAZY-TM keeps the same layout but validates only in tryC. Its reads are
never checked against each other, so it is strictly serializable without
being opaque.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple

from sim import Access, BaseObjectId, PrimitiveOp

from .base import TOpFragment, TransactionalMemory, TxnState
from .types import ABORTED, COMMITTED, TObjectId, TxnId, tobject_key


class LockWord(NamedTuple):
    version: int
    locked: bool
    owner: int | None


UNLOCKED_WORD = LockWord(0, False, None)


@dataclass(frozen=True)
class TVarCell:
    value: BaseObjectId
    lock: BaseObjectId


@dataclass(frozen=True)
class ReadSetEntry:
    obj: TObjectId
    value: Any
    version: int


@dataclass
class RefTxnState(TxnState):
    reads: dict[TObjectId, ReadSetEntry] = field(default_factory=dict)


class RefTM(TransactionalMemory):
    name = "ref"
    incremental_validation = True

    # total t-read steps of the quadratic family stay below this times m²
    TIGHTNESS_CONSTANT = 4

    def _install(self, x, initial):
        value = self.memory.allocate(initial, owner=self.owner, name=f"{x}.value")
        lock = self.memory.allocate(UNLOCKED_WORD, owner=self.owner, name=f"{x}.lock")
        self.cells[x] = TVarCell(value, lock)

    def begin(self, txn: TxnId) -> RefTxnState:
        return RefTxnState(txn)

    def read(self, tx: RefTxnState, x: TObjectId) -> TOpFragment:
        if tx.dead:
            return ABORTED
        if x in tx.writes:
            return tx.writes[x]
        if x in tx.reads:
            return tx.reads[x].value

        cell = self.cells[x]
        word = yield Access(cell.lock, PrimitiveOp.read(), f"{x}.lock")
        if word.locked:
            return self._abort(tx)
        value = yield Access(cell.value, PrimitiveOp.read(), f"{x}.value")
        again = yield Access(cell.lock, PrimitiveOp.read(), f"{x}.lock")
        if again != word:
            return self._abort(tx)

        if self.incremental_validation:
            valid = yield from self._validate(tx)
            if not valid:
                return self._abort(tx)
        tx.reads[x] = ReadSetEntry(x, value, word.version)
        return value

    def _validate(self, tx: RefTxnState, skip: Iterable[TObjectId] = ()) -> TOpFragment:
        """One lock-word read per read-set entry; always a full pass"""
        skip = set(skip)
        valid = True
        for entry in list(tx.reads.values()):
            if entry.obj in skip:
                continue
            word = yield Access(self.cells[entry.obj].lock, PrimitiveOp.read(), f"{entry.obj}.lock")
            if word.locked or word.version != entry.version:
                valid = False
        return valid

    def _release(self, held: list[tuple[TObjectId, int]]) -> TOpFragment:
        for x, version in held:
            yield Access(self.cells[x].lock, PrimitiveOp.write(LockWord(version, False, None)), f"{x}.lock")

    def try_commit(self, tx: RefTxnState) -> TOpFragment:
        if tx.dead:
            return ABORTED
        if not tx.writes:
            valid = yield from self._validate(tx)
            return COMMITTED if valid else self._abort(tx)

        held: list[tuple[TObjectId, int]] = []
        for x in sorted(tx.writes, key=tobject_key):
            cell = self.cells[x]
            if x in tx.reads:
                expected = LockWord(tx.reads[x].version, False, None)
            else:
                word = yield Access(cell.lock, PrimitiveOp.read(), f"{x}.lock")
                if word.locked:
                    yield from self._release(held)
                    return self._abort(tx)
                expected = word
            acquired = yield Access(
                cell.lock, PrimitiveOp.cas(expected, LockWord(expected.version, True, tx.txn.k)), f"{x}.lock"
            )
            if not acquired:
                yield from self._release(held)
                return self._abort(tx)
            held.append((x, expected.version))

        valid = yield from self._validate(tx, skip=tx.writes)
        if not valid:
            yield from self._release(held)
            return self._abort(tx)

        for x, version in held:
            cell = self.cells[x]
            yield Access(cell.value, PrimitiveOp.write(tx.writes[x]), f"{x}.value")
            yield Access(cell.lock, PrimitiveOp.write(LockWord(version + 1, False, None)), f"{x}.lock")
        return COMMITTED


class LazyTM(RefTM):
    name = "lazy"
    incremental_validation = False
