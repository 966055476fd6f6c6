"""
Liveness witnesses: sequential TM-progress and ICF TM-liveness.

Both run transactions without step contention. Sequential progress runs
whole transactions solo from a t-quiescent start and expects commits; ICF
liveness stops a scheduled run at every quiescent point and expects each
process's next t-operation, run solo, to return.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from sim import Marker, MarkerKind, Memory, Schedule, ScheduleError, Simulation
from sim.scheduler import make_chooser
from tm import TOpSpec, TransactionalMemory, TxnIdAllocator, process_machine, workload_tobjects
from tm.workloads import Builder

logger = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10**6
DEFAULT_PROBE_BUDGET = 10_000


@dataclass
class WorkloadVerdict:
    index: int
    passed: bool
    steps: int
    outcomes: list[str] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "workload": self.index,
            "passed": self.passed,
            "steps": self.steps,
            "outcomes": self.outcomes,
            "reason": self.reason,
        }


def check_sequential_progress(
    tm_cls: type[TransactionalMemory],
    workloads: Sequence[Sequence[Sequence[TOpSpec]]],
    step_budget: int = DEFAULT_STEP_BUDGET,
    tobjects: Mapping[str, Any] | None = None,
) -> list[WorkloadVerdict]:
    """Each workload is a list of transaction scripts run back to back by one process"""
    verdicts = []
    for index, scripts in enumerate(workloads):
        memory = Memory(models=())
        tm = tm_cls(memory, tobjects or workload_tobjects({0: scripts}))
        simulation = Simulation(memory, {0: process_machine(tm, 0, scripts, TxnIdAllocator())})
        try:
            steps = simulation.run_to_completion(0, step_budget)
        except ScheduleError:
            verdicts.append(WorkloadVerdict(index, False, step_budget, reason=f"no commit within {step_budget} steps"))
            continue
        results = simulation.result(0)
        outcomes = [r.outcome.value for r in results]
        passed = all(r.committed for r in results)
        reason = "" if passed else "a solo transaction aborted"
        verdicts.append(WorkloadVerdict(index, passed, steps, outcomes, reason))
    return verdicts


@dataclass(frozen=True)
class LivenessProbe:
    prefix: int
    process: int
    responded: bool
    steps: int

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "process": self.process, "responded": self.responded, "steps": self.steps}


def quiescent_points(build: Builder, schedule: Schedule, max_steps: int) -> tuple[list[int], list[int], list[int]]:
    """Run once; return the decisions, every prefix length at which no
    process is inside a t-operation, and the processes"""
    memory, machines = build()
    simulation = Simulation(memory, machines)
    inner = make_chooser(schedule, list(machines))
    points: list[int] = []

    def choose(live, k):
        if not any(simulation.in_operation(p) for p in simulation.processes):
            points.append(k)
        return inner(live, k)

    simulation.run(choose, max_steps)
    return list(simulation.decisions), points, simulation.processes


def _probe(build: Builder, decisions: Sequence[int], prefix: int, pid: int, budget: int) -> LivenessProbe | None:
    memory, machines = build()
    simulation = Simulation(memory, machines)
    for choice in decisions[:prefix]:
        simulation.step(choice)
    if simulation.completed(pid):
        return None

    start = len(memory.records)
    simulation.step(pid)
    used = 1
    invoked = next(
        (
            r
            for r in memory.records[start:]
            if isinstance(r, Marker) and r.kind is MarkerKind.INVOKE and r.txn is not None and r.process == pid
        ),
        None,
    )
    if invoked is None:
        return None

    def responded() -> bool:
        return any(
            isinstance(r, Marker) and r.kind is MarkerKind.RESPOND and r.top == invoked.top
            for r in memory.records[invoked.seq:]
        )

    while not responded() and used < budget and not simulation.completed(pid):
        simulation.step(pid)
        used += 1
    return LivenessProbe(prefix, pid, responded(), used)


def check_icf_liveness(
    build: Builder,
    schedule: Schedule,
    max_steps: int = 10_000,
    step_budget: int = DEFAULT_PROBE_BUDGET,
) -> list[LivenessProbe]:
    """Probe every quiescent point of the scheduled run; failing probes have responded=False"""
    decisions, points, processes = quiescent_points(build, schedule, max_steps)
    probes = []
    for prefix in points:
        for pid in processes:
            probe = _probe(build, decisions, prefix, pid, step_budget)
            if probe is not None:
                probes.append(probe)
    failed = [p for p in probes if not p.responded]
    if failed:
        logger.warning("%d of %d liveness probes did not respond", len(failed), len(probes))
    return probes
