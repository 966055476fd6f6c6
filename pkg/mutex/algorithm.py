"""
Mutual exclusion from a strongly progressive single-object TM.

Each process alternates between two faces. To enter, a process swaps its
[pid, face] into the t-object X inside one transaction (retrying on abort);
the face it read back is its predecessor. It then registers as the
predecessor's successor and, unless the predecessor has already left the
critical section, spins on its own Lock register until the predecessor's
exit unlocks it. Reading back its own previous face needs no hand-off: Lock
has no [p][p] entry and that face's Done was set by the process's last exit.

Registers are plain READ/WRITE cells; all conditional primitives stay inside
the TM.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple

from sim import BOTTOM, LOCKED, NO_OWNER, UNLOCKED, Access, BaseObjectId, Invoke, Mark, Memory, PrimitiveOp, Respond, StepMachine
from tm import OK, SP1TM, TOpSpec, TransactionalMemory, TxnIdAllocator, transaction

FACES = (0, 1)
CS_LABEL = "cs"
X = "X"


class Face(NamedTuple):
    process: int
    face: int


@dataclass(frozen=True)
class FuncResult:
    aborted: bool
    value: Any = None


class MutexShared:
    """Done/Succ/Lock registers plus the TM holding X.

    Under DSM every register of process p is local to p; the TM's cells are
    remote to everyone.
    """

    def __init__(self, memory: Memory, n: int, tm_cls: type[TransactionalMemory] = SP1TM):
        if n < 2:
            raise ValueError("a mutex needs at least two processes")
        self.n = n
        self.tm = tm_cls(memory, {X: BOTTOM}, owner=NO_OWNER)
        self.ids = TxnIdAllocator()
        self.done: dict[Face, BaseObjectId] = {}
        self.succ: dict[Face, BaseObjectId] = {}
        self.lock: dict[tuple[int, int], BaseObjectId] = {}
        for p in range(n):
            for f in FACES:
                self.done[Face(p, f)] = memory.allocate(True, owner=p, name=f"Done[{p},{f}]")
                self.succ[Face(p, f)] = memory.allocate(BOTTOM, owner=p, name=f"Succ[{p},{f}]")
            for q in range(n):
                if q != p:
                    self.lock[(p, q)] = memory.allocate(UNLOCKED, owner=p, name=f"Lock[{p}][{q}]")


class MutexProcess:
    def __init__(self, shared: MutexShared, pid: int):
        self.shared = shared
        self.pid = pid
        self.face = 0
        self.spins = 0
        self.passages = 0

    @property
    def identity(self) -> Face:
        """The [pid, face] pair this passage swaps into X"""
        return Face(self.pid, self.face)

    def func(self) -> StepMachine:
        """One transaction: read X, write [pid, face], commit"""
        txn = self.shared.ids.next(self.pid)
        script = (TOpSpec.read(X), TOpSpec.write(X, self.identity))
        result = yield from transaction(self.shared.tm, txn, script)
        if not result.committed:
            return FuncResult(aborted=True)
        return FuncResult(aborted=False, value=result.reads[X])

    def enter(self) -> StepMachine:
        """Entry: flip face, reset Done/Succ, swap into X, then wait on the predecessor"""
        shared, me = self.shared, self.pid
        self.face = 1 - self.face
        yield Access(shared.done[self.identity], PrimitiveOp.write(False), "done.write")
        yield Access(shared.succ[self.identity], PrimitiveOp.write(BOTTOM), "succ.write")
        while True:
            result = yield from self.func()
            if not result.aborted:
                break

        prev = result.value
        if prev == BOTTOM:
            return
        prev = Face(*prev)
        if prev.process == me:
            # our own previous face; its exit already set Done
            return
        lock = shared.lock[(me, prev.process)]
        yield Access(lock, PrimitiveOp.write(LOCKED), "lock.write")
        yield Access(shared.succ[prev], PrimitiveOp.write(me), "succ.link")
        prev_done = yield Access(shared.done[prev], PrimitiveOp.read(), "done.check")
        if not prev_done:
            # spin while locked; only the predecessor's exit unlocks
            while (yield Access(lock, PrimitiveOp.read(), "lock.spin")) == LOCKED:
                self.spins += 1

    def exit(self) -> StepMachine:
        """Exit: set Done, then unlock the registered successor if there is one"""
        shared, me = self.shared, self.pid
        yield Access(shared.done[self.identity], PrimitiveOp.write(True), "exit.done")
        successor = yield Access(shared.succ[self.identity], PrimitiveOp.read(), "exit.succ")
        if successor != BOTTOM:
            yield Access(shared.lock[(successor, me)], PrimitiveOp.write(UNLOCKED), "exit.unlock")

    def run(self, passes: int) -> StepMachine:
        """Entry, critical section marker, exit; `passes` times"""
        for _ in range(passes):
            yield Invoke("enter")
            yield from self.enter()
            yield Respond(OK)
            yield Mark(CS_LABEL)
            yield Invoke("exit")
            yield from self.exit()
            yield Respond(OK)
            self.passages += 1
        return self.passages
