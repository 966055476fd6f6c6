"""
Adversarial execution families for measuring read validation cost.

Every family starts from a fresh memory whose t-objects X1..Xm hold 0 and
uses three processes:

    p0  the reader, a read-only transaction reading X1, X2, ... in order
    p1  the early writer, which commits a new value to X_ell
    p2  the late writer, which commits a new value to X_i

Fragments run step contention-free, one process at a time, in this order:

    fresh read       reads(i-1), late-writer, read(i)
    stale snapshot   reads(i-1), early-writer, late-writer, read(i)
    final read       reads(m-1), early-writer, late-writer, final (read(m) + tryC)

New values are nv_i = i + NV_OFFSET, never equal to the initial 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from checkers import check_opacity
from sim import ALL_MODELS, BaseObjectId, Execution, Memory, MemoryModel, RmwEvent, ScheduleError, Simulation, replay_execution
from tm import (
    ABORTED,
    COMMITTED,
    History,
    TOpSpec,
    TransactionalMemory,
    TxnId,
    derive_history,
    transaction,
)

from .errors import HarnessDeviation

logger = logging.getLogger(__name__)

NV_OFFSET = 1000
INITIAL_VALUE = 0
FRAGMENT_BUDGET = 100_000

READER, EARLY, LATE = 0, 1, 2
T_READER = TxnId(1, READER)
T_EARLY = TxnId(2, EARLY)
T_LATE = TxnId(3, LATE)


def new_value(i: int) -> int:
    """The value the writer of X_i commits"""
    return i + NV_OFFSET


def tobject(i: int) -> str:
    """Name of the i-th t-object"""
    return f"X{i}"


class Variant(str, Enum):
    VALUE_V = "value-v"
    ABORT = "abort"
    NEW_VALUE = "nv"


def classify(outcome: Any, i: int) -> Variant:
    """Which variant an i-th read outcome belongs to"""
    if outcome is ABORTED:
        return Variant.ABORT
    if outcome == new_value(i):
        return Variant.NEW_VALUE
    return Variant.VALUE_V


@dataclass
class FamilyRun:
    execution: Execution
    history: History
    fragments: dict[str, tuple[int, int]]
    read_outcome: Any
    tryc_outcome: Any = None
    contention: list[BaseObjectId] = field(default_factory=list)
    footprints: dict[str, frozenset[BaseObjectId]] = field(default_factory=dict)
    # set when the read returned nv: the opacity checker's verdict on the history
    opaque: bool | None = None

    @property
    def opacity_candidate(self) -> bool:
        return self.opaque is not None

    def events_of(self, txn: TxnId, fragment: str | None = None) -> list[RmwEvent]:
        """Events of one transaction, optionally within one fragment"""
        start, end = self.fragments[fragment] if fragment else (0, len(self.execution.records))
        return [r for r in self.execution.records[start:end] if isinstance(r, RmwEvent) and r.txn == txn]

    def read_op(self, i: int):
        """The reader's i-th t-read"""
        reads = [op for op in self.history.view(T_READER).ops if op.obj == tobject(i)]
        return reads[0]


class _Family:
    def __init__(self, tm_cls: type[TransactionalMemory], m: int, models: Iterable[MemoryModel | str]):
        self.memory = Memory(models)
        self.tm = tm_cls(self.memory, {tobject(j): INITIAL_VALUE for j in range(1, m + 1)})
        self.machines: dict = {}
        self.fragments: dict[str, tuple[int, int]] = {}
        self.simulation: Simulation | None = None

    def add(self, pid: int, txn: TxnId, script: list[TOpSpec], commit: bool = True) -> None:
        self.machines[pid] = transaction(self.tm, txn, script, commit=commit)

    def start(self) -> None:
        self.simulation = Simulation(self.memory, self.machines)

    def _responses(self, txn: TxnId) -> list:
        return self.simulation.responses.get(txn, [])

    def fragment(self, name: str, pid: int, until_responses: int | None = None) -> None:
        """Run one process alone until its transaction has this many responses
        (or to completion)"""
        start = len(self.memory.records)
        txn = {READER: T_READER, EARLY: T_EARLY, LATE: T_LATE}[pid]
        try:
            if until_responses is None:
                self.simulation.run_to_completion(pid, FRAGMENT_BUDGET)
            else:
                self.simulation.run_until(pid, lambda: len(self._responses(txn)) >= until_responses, FRAGMENT_BUDGET)
        except ScheduleError as e:
            raise HarnessDeviation(name, str(e), self.simulation.snapshot()) from e
        self.fragments[name] = (start, len(self.memory.records))
        logger.info("fragment %s: records %d..%d", name, start, len(self.memory.records))

    def expect_commit(self, name: str, pid: int) -> None:
        """Raise a deviation unless the writer just committed"""
        result = self.simulation.result(pid)
        if result is None or result.outcome is not COMMITTED:
            outcome = None if result is None else result.outcome.value
            raise HarnessDeviation(name, f"writer did not commit (got {outcome})", self.simulation.snapshot())

    def finish(self, read_outcome: Any, tryc_outcome: Any = None) -> FamilyRun:
        """Snapshot, replay-check and package the run"""
        execution = self.simulation.snapshot()
        mismatches = replay_execution(execution)
        if mismatches:
            raise HarnessDeviation("replay", mismatches[0], execution)
        return FamilyRun(execution, derive_history(execution), dict(self.fragments), read_outcome, tryc_outcome)

    def reader_outcome(self, index: int) -> Any:
        """Response to the reader's operation at 0-based `index`, if it has responded"""
        responses = self._responses(T_READER)
        return responses[index] if len(responses) > index else None


def _reads(count: int) -> list[TOpSpec]:
    return [TOpSpec.read(tobject(j)) for j in range(1, count + 1)]


def _contention(run: FamilyRun) -> None:
    """Base objects touched by both writers with at least one nontrivial access"""
    accessed: dict[str, dict[BaseObjectId, bool]] = {}
    for name, txn in (("early-writer", T_EARLY), ("late-writer", T_LATE)):
        touched: dict[BaseObjectId, bool] = {}
        for event in run.events_of(txn):
            touched[event.object] = touched.get(event.object, False) or event.nontrivial
        accessed[name] = touched
        run.footprints[name] = frozenset(obj for obj, written in touched.items() if written)
    early, late = accessed.get("early-writer", {}), accessed.get("late-writer", {})
    run.contention = sorted(obj for obj in early.keys() & late.keys() if early[obj] or late[obj])


def build_fresh_read_execution(
    tm_cls: type[TransactionalMemory],
    i: int,
    with_writer: bool = True,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
) -> FamilyRun:
    """The i-th read, run after a committed writer of X_i, must return nv_i
    (or the initial value when the writer is left out)"""
    if i < 1:
        raise ValueError("i must be at least 1")
    family = _Family(tm_cls, i, models)
    family.add(READER, T_READER, _reads(i), commit=False)
    if with_writer:
        family.add(LATE, T_LATE, [TOpSpec.write(tobject(i), new_value(i))])
    family.start()

    family.fragment("reads", READER, until_responses=i - 1)
    if with_writer:
        family.fragment("late-writer", LATE)
        family.expect_commit("late-writer", LATE)
    family.fragment("read", READER, until_responses=i)

    outcome = family.reader_outcome(i - 1)
    expected = new_value(i) if with_writer else INITIAL_VALUE
    if outcome != expected:
        raise HarnessDeviation("read", f"read of {tobject(i)} returned {outcome}, expected {expected}", family.simulation.snapshot())
    return family.finish(outcome)


def build_stale_snapshot_execution(
    tm_cls: type[TransactionalMemory],
    i: int,
    ell: int,
    variant: Variant | str | None = None,
    with_early_writer: bool = True,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
) -> FamilyRun:
    """Like the fresh read, with X_ell overwritten first so the reader's
    snapshot is already stale when it reaches X_i.

    The i-th read is expected to return v or abort; `variant` pins which one.
    An nv outcome is returned rather than raised; the run then carries the
    opacity checker's verdict on the derived history in `opaque`.
    """
    if with_early_writer and not 1 <= ell <= i - 1:
        raise ValueError("ell must satisfy 1 <= ell <= i-1")
    family = _Family(tm_cls, i, models)
    family.add(READER, T_READER, _reads(i), commit=False)
    if with_early_writer:
        family.add(EARLY, T_EARLY, [TOpSpec.write(tobject(ell), new_value(ell))])
    family.add(LATE, T_LATE, [TOpSpec.write(tobject(i), new_value(i))])
    family.start()

    family.fragment("reads", READER, until_responses=i - 1)
    if with_early_writer:
        family.fragment("early-writer", EARLY)
        family.expect_commit("early-writer", EARLY)
    family.fragment("late-writer", LATE)
    family.expect_commit("late-writer", LATE)
    family.fragment("read", READER, until_responses=i)

    outcome = family.reader_outcome(i - 1)
    observed = classify(outcome, i)
    if variant is not None and observed is not Variant(variant):
        raise HarnessDeviation("read", f"expected the {Variant(variant).value} variant, read returned {outcome}", family.simulation.snapshot())
    run = family.finish(outcome)
    if observed is Variant.NEW_VALUE:
        run.opaque = check_opacity(run.history) is not None
        logger.warning(
            "read of %s returned nv after X%d changed: opacity violation candidate (opaque=%s)",
            tobject(i),
            ell,
            run.opaque,
        )
    _contention(run)
    return run


def build_final_read_execution(
    tm_cls: type[TransactionalMemory],
    m: int,
    ell: int,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
) -> FamilyRun:
    """The stale snapshot family for i = m, where the reader goes on to its
    tryC after the m-th read"""
    if not 1 <= ell <= m - 1:
        raise ValueError("ell must satisfy 1 <= ell <= m-1")
    family = _Family(tm_cls, m, models)
    family.add(READER, T_READER, _reads(m), commit=True)
    family.add(EARLY, T_EARLY, [TOpSpec.write(tobject(ell), new_value(ell))])
    family.add(LATE, T_LATE, [TOpSpec.write(tobject(m), new_value(m))])
    family.start()

    family.fragment("reads", READER, until_responses=m - 1)
    family.fragment("early-writer", EARLY)
    family.expect_commit("early-writer", EARLY)
    family.fragment("late-writer", LATE)
    family.expect_commit("late-writer", LATE)
    family.fragment("final", READER)

    read_outcome = family.reader_outcome(m - 1)
    tryc_outcome = family.reader_outcome(m) if read_outcome is not ABORTED else None
    run = family.finish(read_outcome, tryc_outcome)
    _contention(run)
    return run
