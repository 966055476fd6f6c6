"""
Common shape of a TM implementation.

A TM lays its cells out in a Memory when constructed and then serves
t-operations as generator fragments that yield scheduler Access requests.
The caller (the transaction driver) wraps each fragment in its invocation and
response markers.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, Generator, Mapping

from sim import NO_OWNER, Access, Memory

from .types import ABORTED, OK, TObjectId, TxnId, tobject_key

logger = logging.getLogger(__name__)

TOpFragment = Generator[Access, Any, Any]


@dataclass
class TxnState:
    txn: TxnId
    dead: bool = False
    writes: dict[TObjectId, Any] = field(default_factory=dict)


class TransactionalMemory(ABC):
    name: ClassVar[str]

    def __init__(self, memory: Memory, tobjects: Mapping[TObjectId, Any], owner: int = NO_OWNER):
        self.memory = memory
        self.owner = owner
        self.cells: dict[TObjectId, Any] = {}
        for x in sorted(tobjects, key=tobject_key):
            memory.tobjects[x] = tobjects[x]
            self._install(x, tobjects[x])
        logger.debug("%s installed %d t-objects", self.name, len(tobjects))

    @property
    def tobjects(self) -> list[TObjectId]:
        return sorted(self.memory.tobjects, key=tobject_key)

    @abstractmethod
    def _install(self, x: TObjectId, initial: Any) -> None:
        ...

    @abstractmethod
    def begin(self, txn: TxnId) -> TxnState:
        ...

    @abstractmethod
    def read(self, tx: TxnState, x: TObjectId) -> TOpFragment:
        ...

    def write(self, tx: TxnState, x: TObjectId, value: Any) -> TOpFragment:
        """Deferred update: buffer locally, touch no shared memory"""
        if tx.dead:
            return ABORTED
        tx.writes[x] = value
        return OK
        yield  # pragma: no cover

    @abstractmethod
    def try_commit(self, tx: TxnState) -> TOpFragment:
        ...

    def _abort(self, tx: TxnState):
        tx.dead = True
        return ABORTED
