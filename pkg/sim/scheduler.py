"""
Cooperative scheduler for processes written as step machines.

A step machine is a generator that yields requests:

    Access(obj, primitive)   apply one primitive; the response is sent back
    Invoke(op, txn, ...)     invocation marker of an operation
    Respond(outcome)         response marker of the innermost open operation
    Mark(label)              zero-cost marker (critical-section occupancy)

One schedule entry lets the chosen process apply exactly one primitive. Any
markers it yields around that primitive are recorded in the same entry; the
process then stops in front of its next primitive or invocation. A process
that responds before applying any primitive ends its entry there, so an
operation that needs no shared memory still costs one schedule entry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Generator, Hashable, Mapping, Sequence

import numpy as np

from .errors import ScheduleError
from .execution import Execution
from .memory import BaseObjectId, MarkerKind, Memory
from .primitives import PrimitiveOp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Access:
    obj: BaseObjectId
    primitive: PrimitiveOp
    label: str | None = None


@dataclass(frozen=True)
class Invoke:
    op: str
    txn: Hashable | None = None
    obj: Any = None
    arg: Any = None


@dataclass(frozen=True)
class Respond:
    outcome: Any = None


@dataclass(frozen=True)
class Mark:
    label: str


Request = Access | Invoke | Respond | Mark
StepMachine = Generator[Request, Any, Any]

# chooser(live processes, number of decisions so far) -> pid, or None to stop
Chooser = Callable[[Sequence[int], int], "int | None"]


class ScheduleMode(str, Enum):
    SCRIPTED = "scripted"
    ROUND_ROBIN = "roundrobin"
    RANDOM = "random"


@dataclass(frozen=True)
class Schedule:
    mode: ScheduleMode
    steps: tuple[int, ...] = ()
    seed: int = 0

    @classmethod
    def scripted(cls, steps: Sequence[int]) -> Schedule:
        return cls(ScheduleMode.SCRIPTED, tuple(steps))

    @classmethod
    def round_robin(cls) -> Schedule:
        return cls(ScheduleMode.ROUND_ROBIN)

    @classmethod
    def random(cls, seed: int = 0) -> Schedule:
        return cls(ScheduleMode.RANDOM, seed=seed)


@dataclass
class _OpenOp:
    op: str
    txn: Hashable | None
    top: int


@dataclass
class _Slot:
    pid: int
    machine: StepMachine
    held: Request | None = None
    completed: bool = False
    result: Any = None
    open_ops: list[_OpenOp] = field(default_factory=list)
    entries: int = 0
    view: list[Any] = field(default_factory=list)


class Simulation:
    def __init__(self, memory: Memory, machines: Mapping[int, StepMachine]):
        self.memory = memory
        self._slots = {pid: _Slot(pid, machine) for pid, machine in sorted(machines.items())}
        self.decisions: list[int] = []
        self.responses: dict[Hashable, list[Any]] = {}

    @property
    def processes(self) -> list[int]:
        return list(self._slots)

    def live(self) -> list[int]:
        return [pid for pid, slot in self._slots.items() if not slot.completed]

    def completed(self, pid: int) -> bool:
        return self._slot(pid).completed

    def result(self, pid: int) -> Any:
        return self._slot(pid).result

    def in_operation(self, pid: int, tm_only: bool = True) -> bool:
        slot = self._slot(pid)
        return any(o.txn is not None or not tm_only for o in slot.open_ops)

    def held(self, pid: int) -> Request | None:
        return self._slot(pid).held

    def state_key(self) -> Hashable:
        """Shared values plus, per process, its entry count and every response it received.

        Step machines are deterministic, so two runs with equal keys continue
        identically under the same choices.
        """
        local = tuple((pid, slot.completed, slot.entries, tuple(slot.view)) for pid, slot in self._slots.items())
        return self.memory.state_key(), local

    def _slot(self, pid: int) -> _Slot:
        try:
            return self._slots[pid]
        except KeyError:
            raise ScheduleError(f"process {pid} has no step machine") from None

    def _resume(self, slot: _Slot, value: Any) -> Request | None:
        try:
            return slot.machine.send(value)
        except StopIteration as stop:
            slot.completed = True
            slot.result = stop.value
            return None

    def step(self, pid: int) -> bool:
        """Run one schedule entry for `pid`; False when it only recorded a no-op"""
        slot = self._slot(pid)
        self.decisions.append(pid)
        if slot.completed:
            self.memory.record_marker(pid, MarkerKind.NOOP)
            return False

        slot.entries += 1
        item = slot.held if slot.held is not None else self._resume(slot, None)
        slot.held = None
        applied = False
        while item is not None:
            if isinstance(item, Access):
                if applied:
                    slot.held = item
                    break
                top = slot.open_ops[-1] if slot.open_ops else None
                event = self.memory.apply(
                    pid,
                    item.obj,
                    item.primitive,
                    txn=top.txn if top else None,
                    top=top.top if top else None,
                    label=item.label,
                )
                applied = True
                slot.view.append(event.response)
                item = self._resume(slot, event.response)
            elif isinstance(item, Invoke):
                if applied:
                    slot.held = item
                    break
                # the invocation's own seq tags every record of this operation
                top = len(self.memory.records)
                self.memory.record_marker(
                    pid, MarkerKind.INVOKE, op=item.op, txn=item.txn, top=top, obj=item.obj, arg=item.arg
                )
                slot.open_ops.append(_OpenOp(item.op, item.txn, top))
                item = self._resume(slot, None)
            elif isinstance(item, Respond):
                if not slot.open_ops:
                    raise ScheduleError(f"process {pid} responded with no open operation")
                opened = slot.open_ops.pop()
                self.memory.record_marker(
                    pid, MarkerKind.RESPOND, op=opened.op, txn=opened.txn, top=opened.top, outcome=item.outcome
                )
                if opened.txn is not None:
                    self.responses.setdefault(opened.txn, []).append(item.outcome)
                if not applied:
                    break
                item = self._resume(slot, None)
            elif isinstance(item, Mark):
                self.memory.record_marker(pid, MarkerKind.MARK, label=item.label)
                item = self._resume(slot, None)
            else:
                raise ScheduleError(f"process {pid} yielded {item!r}, not a scheduler request")
        logger.debug("step %d: p%s", len(self.decisions) - 1, pid)
        return True

    def run(self, chooser: Chooser, max_steps: int) -> Execution:
        """Step until the chooser stops, every machine completes or max_steps entries ran"""
        while True:
            live = self.live()
            if not live:
                return self.snapshot()
            if len(self.decisions) >= max_steps:
                return self.snapshot(truncated=True)
            pid = chooser(live, len(self.decisions))
            if pid is None:
                return self.snapshot()
            self.step(pid)

    def run_until(self, pid: int, predicate: Callable[[], bool], budget: int) -> int:
        """Step `pid` alone until predicate() holds; returns the entries used"""
        used = 0
        while not predicate():
            if self.completed(pid):
                raise ScheduleError(f"process {pid} completed before the fragment ended")
            if used >= budget:
                raise ScheduleError(f"process {pid} exceeded its budget of {budget} steps")
            self.step(pid)
            used += 1
        return used

    def run_to_completion(self, pid: int, budget: int) -> int:
        used = 0
        while not self.completed(pid):
            if used >= budget:
                raise ScheduleError(f"process {pid} exceeded its budget of {budget} steps")
            self.step(pid)
            used += 1
        return used

    def snapshot(self, truncated: bool = False) -> Execution:
        return Execution.from_memory(self.memory, self.decisions, truncated)


def scripted_chooser(steps: Sequence[int]) -> Chooser:
    def choose(live, k):
        return steps[k] if k < len(steps) else None

    return choose


def round_robin_chooser(processes: Sequence[int]) -> Chooser:
    order = sorted(processes)
    position = {"next": 0}

    def choose(live, k):
        live_set = set(live)
        for offset in range(len(order)):
            pid = order[(position["next"] + offset) % len(order)]
            if pid in live_set:
                position["next"] = (order.index(pid) + 1) % len(order)
                return pid
        return None

    return choose


def random_chooser(seed: int) -> Chooser:
    rng = np.random.default_rng(seed)

    def choose(live, k):
        return live[int(rng.integers(len(live)))]

    return choose


def make_chooser(schedule: Schedule, processes: Sequence[int]) -> Chooser:
    if schedule.mode is ScheduleMode.SCRIPTED:
        return scripted_chooser(schedule.steps)
    if schedule.mode is ScheduleMode.ROUND_ROBIN:
        return round_robin_chooser(processes)
    return random_chooser(schedule.seed)


def run_schedule(
    memory: Memory,
    machines: Mapping[int, StepMachine],
    schedule: Schedule,
    max_steps: int,
) -> Execution:
    """Run machines under a schedule.

    SCRIPTED entries naming a completed process record a no-op; the other
    modes only pick live processes. Hitting max_steps with work left marks
    the execution truncated.
    """
    unknown = sorted(set(schedule.steps) - set(machines))
    if unknown:
        raise ScheduleError(f"schedule names processes without machines: {unknown}")

    simulation = Simulation(memory, machines)
    execution = simulation.run(make_chooser(schedule, list(machines)), max_steps)
    if execution.truncated:
        logger.info("run truncated after %d steps", len(execution.decisions))
    return execution
