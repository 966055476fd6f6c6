"""Mutex runs: safety scans, per-passage RMR accounting and exhaustive exploration."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import pandas as pd

from sim import (
    ALL_MODELS,
    Execution,
    Marker,
    MarkerKind,
    Memory,
    MemoryModel,
    RmwEvent,
    Schedule,
    StepMachine,
    explore_schedules,
    run_schedule,
)
from tm import SP1TM, TransactionalMemory

from .algorithm import MutexProcess, MutexShared

logger = logging.getLogger(__name__)

SPIN_LABEL = "lock.spin"
UNLOCK_LABEL = "exit.unlock"
DEFAULT_MAX_STEPS = 200_000
# two passages per process for n=2 fit with room for spinning
DEFAULT_EXPLORE_DEPTH = 48


def build_mutex(
    n: int,
    passes: int,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
    tm_cls: type[TransactionalMemory] = SP1TM,
) -> tuple[Memory, dict[int, StepMachine]]:
    """Fresh memory plus one Entry/CS/Exit machine per process"""
    memory = Memory(models)
    shared = MutexShared(memory, n, tm_cls)
    machines = {p: MutexProcess(shared, p).run(passes) for p in range(n)}
    return memory, machines


def check_mutual_exclusion(execution: Execution) -> list[int]:
    """Record indices after which two or more processes are in the critical section"""
    inside: set[int] = set()
    bad = []
    for index, record in enumerate(execution.records):
        if not isinstance(record, Marker) or record.txn is not None:
            continue
        if record.kind is MarkerKind.RESPOND and record.op == "enter":
            inside.add(record.process)
            if len(inside) > 1:
                bad.append(index)
        elif record.kind is MarkerKind.INVOKE and record.op == "exit":
            inside.discard(record.process)
    return bad


@dataclass
class PassageCost:
    process: int
    passage: int
    rmr: dict[str, int] = field(default_factory=dict)
    spin_rmr: dict[str, int] = field(default_factory=dict)
    tm_rmr: dict[str, int] = field(default_factory=dict)
    exit_events: int = 0
    complete: bool = False


def passage_costs(execution: Execution) -> list[PassageCost]:
    """Split each process's records into Entry..Exit passages and sum their RMRs"""
    models = [m.value for m in execution.models]
    current: dict[int, PassageCost] = {}
    exit_top: dict[int, int] = {}
    counts: dict[int, int] = {}
    passages: list[PassageCost] = []

    for record in execution.records:
        pid = record.process
        if isinstance(record, Marker) and record.txn is None:
            if record.kind is MarkerKind.INVOKE and record.op == "enter":
                counts[pid] = counts.get(pid, 0) + 1
                cost = PassageCost(
                    pid,
                    counts[pid],
                    rmr=dict.fromkeys(models, 0),
                    spin_rmr=dict.fromkeys(models, 0),
                    tm_rmr=dict.fromkeys(models, 0),
                )
                current[pid] = cost
                passages.append(cost)
            elif record.kind is MarkerKind.INVOKE and record.op == "exit":
                exit_top[pid] = record.top
            elif record.kind is MarkerKind.RESPOND and record.op == "exit" and pid in current:
                current.pop(pid).complete = True
            continue
        if not isinstance(record, RmwEvent) or pid not in current:
            continue
        cost = current[pid]
        bucket = cost.tm_rmr if record.tm else cost.rmr
        for model, charged in record.rmr.items():
            bucket[model] = bucket.get(model, 0) + charged
            if record.label == SPIN_LABEL:
                cost.spin_rmr[model] = cost.spin_rmr.get(model, 0) + charged
        if not record.tm and record.top is not None and record.top == exit_top.get(pid):
            cost.exit_events += 1
    return passages


def completed_passages(passages: Iterable[PassageCost], n: int) -> dict[int, int]:
    """Finished Entry..Exit passages per process"""
    done = dict.fromkeys(range(n), 0)
    for cost in passages:
        if cost.complete:
            done[cost.process] += 1
    return done


@dataclass
class MutexReport:
    n: int
    passes: int
    models: tuple[str, ...]
    violations: list[int]
    completed: dict[int, int]
    passages: list[PassageCost]
    truncated: bool
    execution: Execution

    @property
    def safe(self) -> bool:
        return not self.violations

    @property
    def all_completed(self) -> bool:
        return all(done == self.passes for done in self.completed.values())

    def max_passage_rmr(self, model: str) -> int:
        """Largest non-TM RMR count of a completed passage under one model"""
        return max((p.rmr.get(model, 0) for p in self.passages if p.complete), default=0)

    def max_spin_rmr(self, model: str) -> int:
        """Largest RMR count spent in a single passage's spin loop"""
        return max((p.spin_rmr.get(model, 0) for p in self.passages), default=0)

    @property
    def max_exit_events(self) -> int:
        """Most non-TM events any Exit issued"""
        return max((p.exit_events for p in self.passages), default=0)

    def tm_rmr_totals(self) -> dict[str, int]:
        """RMRs charged inside the TM, summed over every passage"""
        return {m: sum(p.tm_rmr.get(m, 0) for p in self.passages) for m in self.models}

    def to_frame(self) -> pd.DataFrame:
        """One row per passage"""
        columns = ["process", "passage"]
        columns += list(self.models)
        columns += [f"spin_{m}" for m in self.models]
        columns += [f"tm_{m}" for m in self.models]
        columns += ["exitEvents", "complete"]
        rows = []
        for p in self.passages:
            row = {"process": p.process, "passage": p.passage}
            row.update({m: p.rmr.get(m, 0) for m in self.models})
            row.update({f"spin_{m}": p.spin_rmr.get(m, 0) for m in self.models})
            row.update({f"tm_{m}": p.tm_rmr.get(m, 0) for m in self.models})
            row.update({"exitEvents": p.exit_events, "complete": p.complete})
            rows.append(row)
        return pd.DataFrame(rows, columns=columns)

    def rmr_frame(self) -> pd.DataFrame:
        """Per-process non-TM RMR totals, one column per memory model"""
        columns = ["process", *self.models]
        rows = []
        for pid in sorted(self.completed):
            mine = [p for p in self.passages if p.process == pid]
            rows.append({"process": pid, **{m: sum(p.rmr.get(m, 0) for p in mine) for m in self.models}})
        return pd.DataFrame(rows, columns=columns)

    def summary(self) -> dict:
        """Headline numbers for the report provenance"""
        return {
            "n": self.n,
            "passes": self.passes,
            "violations": len(self.violations),
            "allCompleted": self.all_completed,
            "truncated": self.truncated,
            "maxPassageRmr": {m: self.max_passage_rmr(m) for m in self.models},
            "maxSpinRmr": {m: self.max_spin_rmr(m) for m in self.models},
            "maxExitEvents": self.max_exit_events,
            "tmRmr": self.tm_rmr_totals(),
        }


def run_mutex_experiment(
    n: int,
    passes: int,
    schedule: Schedule,
    max_steps: int = DEFAULT_MAX_STEPS,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
) -> MutexReport:
    """Run n processes for `passes` passages under one schedule and scan the result"""
    memory, machines = build_mutex(n, passes, models)
    execution = run_schedule(memory, machines, schedule, max_steps)
    violations = check_mutual_exclusion(execution)
    if violations:
        logger.warning("mutual exclusion violated at %d prefixes, first at record %d", len(violations), violations[0])
    passages = passage_costs(execution)
    completed = completed_passages(passages, n)
    report = MutexReport(
        n=n,
        passes=passes,
        models=tuple(m.value for m in memory.models),
        violations=violations,
        completed=completed,
        passages=passages,
        truncated=execution.truncated,
        execution=execution,
    )
    logger.info("mutex n=%d passes=%d: %s", n, passes, report.summary())
    return report


@dataclass
class MutexExploration:
    """Outcome of an exhaustive mutex search.

    `completed_runs` counts explored runs in which every process finished all
    of its passages; `handoff_runs` counts runs whose exit released a waiting
    successor. Both staying at zero means the depth is too shallow to say
    anything.
    """

    runs: int = 0
    truncated_runs: int = 0
    pruned_runs: int = 0
    states: int = 0
    completed_runs: int = 0
    handoff_runs: int = 0
    counterexamples: list[Execution] = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not self.counterexamples

    def summary(self) -> dict:
        return {
            "runs": self.runs,
            "truncatedRuns": self.truncated_runs,
            "prunedRuns": self.pruned_runs,
            "states": self.states,
            "completedRuns": self.completed_runs,
            "handoffRuns": self.handoff_runs,
            "violations": len(self.counterexamples),
        }


def explore_mutex(
    n: int = 2,
    passes: int = 2,
    depth: int = DEFAULT_EXPLORE_DEPTH,
    max_runs: int | None = None,
    stop_on_violation: bool = True,
) -> MutexExploration:
    """Every schedule up to `depth` entries, each checked for mutual exclusion.

    Runs that reach an already explored configuration are cut short, which
    keeps two processes with two passages each within reach.
    """
    result = MutexExploration()

    def visit(execution: Execution) -> bool:
        finished = completed_passages(passage_costs(execution), n)
        if all(done == passes for done in finished.values()):
            result.completed_runs += 1
        if any(isinstance(r, RmwEvent) and r.label == UNLOCK_LABEL for r in execution.records):
            result.handoff_runs += 1
        if check_mutual_exclusion(execution):
            result.counterexamples.append(execution)
            return stop_on_violation
        return False

    stats = explore_schedules(lambda: build_mutex(n, passes, models=()), depth, visit, max_runs, prune=True)
    result.runs = stats.runs
    result.truncated_runs = stats.truncated_runs
    result.pruned_runs = stats.pruned_runs
    result.states = stats.states
    logger.info("mutex exploration n=%d passes=%d depth=%d: %s", n, passes, depth, result.summary())
    return result
