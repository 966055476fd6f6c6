"""
Remote memory reference (RMR) ledgers for three memory models.

Each ledger keeps per-process cache state (or DSM ownership) and answers one
question per access: does this access cost an RMR? Trivial primitives count
as reads, every other primitive as a write (a failed CAS still requests the
line in exclusive mode).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Hashable

from .errors import MissingOwnershipError

NO_OWNER = -1


class MemoryModel(str, Enum):
    WRITE_THROUGH_CC = "wt"
    WRITE_BACK_CC = "wb"
    DSM = "dsm"


ALL_MODELS = (MemoryModel.WRITE_THROUGH_CC, MemoryModel.WRITE_BACK_CC, MemoryModel.DSM)


class CacheState(str, Enum):
    ABSENT = "absent"
    SHARED = "shared"
    EXCLUSIVE = "exclusive"
    INVALIDATED = "invalidated"


class RmrFilter(str, Enum):
    ALL = "all"
    NON_TM_ONLY = "non_tm"
    TM_ONLY = "tm"


@dataclass
class RmrCounts:
    tm: int = 0
    non_tm: int = 0

    @property
    def total(self) -> int:
        return self.tm + self.non_tm

    def select(self, flt: RmrFilter) -> int:
        if flt is RmrFilter.TM_ONLY:
            return self.tm
        if flt is RmrFilter.NON_TM_ONLY:
            return self.non_tm
        return self.total


class RmrLedger(ABC):
    model: MemoryModel

    def __init__(self):
        self.counts: dict[int, RmrCounts] = defaultdict(RmrCounts)

    def register(self, obj: Hashable, owner: int | None) -> None:
        """Called once per allocated base object"""

    def charge(self, process: int, obj: Hashable, write: bool, tm: bool) -> int:
        cost = self._access(process, obj, write)
        if cost:
            if tm:
                self.counts[process].tm += cost
            else:
                self.counts[process].non_tm += cost
        return cost

    def count(self, process: int, flt: RmrFilter = RmrFilter.ALL) -> int:
        if process not in self.counts:
            return 0
        return self.counts[process].select(flt)

    @abstractmethod
    def _access(self, process: int, obj: Hashable, write: bool) -> int:
        ...


class _CacheLedger(RmrLedger):
    def __init__(self):
        super().__init__()
        # object -> process -> cache state; absent entries mean ABSENT
        self.lines: dict[Hashable, dict[int, CacheState]] = defaultdict(dict)

    def state(self, process: int, obj: Hashable) -> CacheState:
        return self.lines[obj].get(process, CacheState.ABSENT)

    def _invalidate_others(self, process: int, obj: Hashable, only: CacheState | None = None) -> None:
        holders = self.lines[obj]
        for other, state in holders.items():
            if other == process or state is CacheState.INVALIDATED:
                continue
            if only is None or state is only:
                holders[other] = CacheState.INVALIDATED


class WriteThroughLedger(_CacheLedger):
    """Every write goes to memory and invalidates the other copies; the
    writer keeps a valid copy."""

    model = MemoryModel.WRITE_THROUGH_CC

    def _access(self, process, obj, write):
        if write:
            self._invalidate_others(process, obj)
            self.lines[obj][process] = CacheState.SHARED
            return 1
        if self.state(process, obj) is CacheState.SHARED:
            return 0
        self.lines[obj][process] = CacheState.SHARED
        return 1


class WriteBackLedger(_CacheLedger):
    model = MemoryModel.WRITE_BACK_CC

    def _access(self, process, obj, write):
        state = self.state(process, obj)
        if write:
            if state is CacheState.EXCLUSIVE:
                return 0
            self._invalidate_others(process, obj)
            self.lines[obj][process] = CacheState.EXCLUSIVE
            return 1
        if state in (CacheState.SHARED, CacheState.EXCLUSIVE):
            return 0
        self._invalidate_others(process, obj, only=CacheState.EXCLUSIVE)
        self.lines[obj][process] = CacheState.SHARED
        return 1

    def exclusive_holders(self, obj: Hashable) -> list[int]:
        return [p for p, s in self.lines[obj].items() if s is CacheState.EXCLUSIVE]


class DsmLedger(RmrLedger):
    model = MemoryModel.DSM

    def __init__(self):
        super().__init__()
        self.owners: dict[Hashable, int] = {}

    def register(self, obj, owner):
        if owner is None:
            raise MissingOwnershipError(f"base object {obj} has no DSM owner")
        self.owners[obj] = owner

    def _access(self, process, obj, write):
        try:
            owner = self.owners[obj]
        except KeyError:
            raise MissingOwnershipError(f"base object {obj} has no DSM owner") from None
        return 0 if owner == process else 1


_LEDGERS = {
    MemoryModel.WRITE_THROUGH_CC: WriteThroughLedger,
    MemoryModel.WRITE_BACK_CC: WriteBackLedger,
    MemoryModel.DSM: DsmLedger,
}


def make_ledger(model: MemoryModel | str) -> RmrLedger:
    return _LEDGERS[MemoryModel(model)]()
