"""
Lab operations shared by the command line and the MCP server.

The module-level functions raise library exceptions; `LabTools` wraps them
for the server and turns every failure into an {"error": ...} dict.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable

import pandas as pd

from checkers import (
    BoundExceededError,
    check_icf_liveness,
    check_invisible_reads,
    check_opacity,
    check_progressiveness,
    check_strict_serializability,
    check_strong_progressiveness,
    check_weak_dap,
)
from checkers.serialization import DEFAULT_BOUND
from harness import CostReport, measure_final_read_space, measure_quadratic
from mutex import DEFAULT_EXPLORE_DEPTH, MutexExploration, MutexReport, explore_mutex, run_mutex_experiment
from sim import Execution, Schedule, load_schedule, replay_execution, run_schedule
from tm import TM_REGISTRY, History, derive_history, get_tm, random_workload, workload_builder

from .trace_io import parse_trace

logger = logging.getLogger(__name__)

PROPERTIES = ("opacity", "strict-ser", "prog", "strong-prog", "weak-dap", "inv-reads", "inv-reads-strong")
EXECUTION_PROPERTIES = {"weak-dap", "inv-reads", "inv-reads-strong"}

TM_CHECKS = {
    "ref": ("opacity", "prog", "weak-dap", "inv-reads", "icf-liveness"),
    "lazy": ("strict-ser", "prog", "weak-dap", "inv-reads", "icf-liveness"),
    "sp1": ("strict-ser", "strong-prog", "icf-liveness"),
}

TM_DESCRIPTIONS = {
    "ref": "per-object versioned lock with incremental read validation; opaque, progressive, weak DAP, invisible reads",
    "lazy": "the ref layout validating only in tryC; strictly serializable but not opaque",
    "sp1": "single t-object TM committing by CAS on (value, version); strongly progressive",
}


class Verdict(str, Enum):
    PASS = "pass"
    VIOLATION = "violation"
    REFUSED = "refused"


@dataclass
class CheckResult:
    property: str
    verdict: Verdict
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"property": self.property, "verdict": self.verdict.value, **self.details}


def list_tms() -> list[dict]:
    return [{"name": name, "checks": list(TM_CHECKS[name]), "description": TM_DESCRIPTIONS[name]} for name in sorted(TM_REGISTRY)]


def _history_of(trace: History | Execution) -> History:
    return trace if isinstance(trace, History) else derive_history(trace)


def check_trace(trace: History | Execution | str, prop: str, bound: int = DEFAULT_BOUND) -> CheckResult:
    """Run one property checker; raises ValueError for an unknown property or
    an execution-level property asked of a bare history"""
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    if isinstance(trace, str):
        trace = parse_trace(trace)
    if prop in EXECUTION_PROPERTIES and not isinstance(trace, Execution):
        raise ValueError(f"{prop} needs an execution log, not a history")

    try:
        if prop in ("opacity", "strict-ser"):
            history = _history_of(trace)
            checker = check_opacity if prop == "opacity" else check_strict_serializability
            witness = checker(history, bound)
            if witness is None:
                return CheckResult(prop, Verdict.VIOLATION, {"transactions": len(history.txns())})
            return CheckResult(prop, Verdict.PASS, {"witness": witness.to_json()})
        if prop == "prog":
            orphans = check_progressiveness(_history_of(trace))
            details = {"violations": [{"txn": t.k, "process": t.process} for t in orphans]}
            return CheckResult(prop, Verdict.VIOLATION if orphans else Verdict.PASS, details)
        if prop == "strong-prog":
            bad = check_strong_progressiveness(_history_of(trace), bound)
            return CheckResult(prop, Verdict.VIOLATION if bad else Verdict.PASS, {"violations": [p.to_json() for p in bad]})
        if prop == "weak-dap":
            violations = check_weak_dap(trace)
        else:
            mode = "strong" if prop == "inv-reads-strong" else "weak"
            violations = check_invisible_reads(trace, mode)
        return CheckResult(prop, Verdict.VIOLATION if violations else Verdict.PASS, {"violations": [v.to_json() for v in violations]})
    except BoundExceededError as e:
        logger.info("refused %s: %s", prop, e)
        return CheckResult(prop, Verdict.REFUSED, {"reason": str(e)})


@dataclass
class SimulationRun:
    seed: int
    execution: Execution
    history: History
    results: list[CheckResult]
    replay_mismatches: list[str]

    @property
    def verdict(self) -> Verdict:
        if self.replay_mismatches or any(r.verdict is Verdict.VIOLATION for r in self.results):
            return Verdict.VIOLATION
        if self.execution.truncated or any(r.verdict is Verdict.REFUSED for r in self.results):
            return Verdict.REFUSED
        return Verdict.PASS

    def to_record(self) -> dict:
        record = {
            "seed": self.seed,
            "records": len(self.execution.records),
            "transactions": len(self.history.txns()),
            "truncated": self.execution.truncated,
            "replay": Verdict.VIOLATION.value if self.replay_mismatches else Verdict.PASS.value,
        }
        record.update({r.property: r.verdict.value for r in self.results})
        record["verdict"] = self.verdict.value
        return record


@dataclass
class SweepReport:
    tm: str
    checks: tuple[str, ...]
    runs: list[SimulationRun] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        return ["seed", "records", "transactions", "truncated", "replay", *self.checks, "verdict"]

    @property
    def verdict(self) -> Verdict:
        verdicts = {run.verdict for run in self.runs}
        for v in (Verdict.VIOLATION, Verdict.REFUSED):
            if v in verdicts:
                return v
        return Verdict.PASS

    @property
    def representative(self) -> SimulationRun | None:
        """The first violating run, or else the last run"""
        for run in self.runs:
            if run.verdict is Verdict.VIOLATION:
                return run
        return self.runs[-1] if self.runs else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([run.to_record() for run in self.runs], columns=self.columns)

    def summary(self) -> dict:
        counts = {v.value: sum(1 for run in self.runs if run.verdict is v) for v in Verdict}
        return {"tm": self.tm, "runs": len(self.runs), "verdict": self.verdict.value, **counts}


def simulate(
    tm: str = "ref",
    n: int = 2,
    txns: int = 2,
    objects: int = 2,
    seed: int = 0,
    sweep: int = 1,
    mode: str = "random",
    schedule_path: str | Path | None = None,
    max_steps: int = 100_000,
    bound: int = DEFAULT_BOUND,
    models: Iterable[str] = ("wt", "wb", "dsm"),
) -> SweepReport:
    """Seeded random workloads on one TM, each run checked for the properties that TM claims"""
    tm_cls = get_tm(tm)
    checks = TM_CHECKS[tm]
    models = tuple(models)
    fixed = load_schedule(schedule_path) if schedule_path else None
    report = SweepReport(tm, checks)
    for current in range(seed, seed + max(sweep, 1)):
        workload = random_workload(current, processes=n, txns_per_process=txns, objects=objects, single_object=tm == "sp1")
        build = workload_builder(tm_cls, workload, models=models)
        if fixed is not None:
            schedule = fixed
        elif mode == "roundrobin":
            schedule = Schedule.round_robin()
        elif mode == "random":
            schedule = Schedule.random(current)
        else:
            raise ValueError(f"mode {mode!r} needs a schedule file")
        memory, machines = build()
        execution = run_schedule(memory, machines, schedule, max_steps)
        results = []
        for prop in checks:
            if prop == "icf-liveness":
                probes = check_icf_liveness(build, schedule, max_steps)
                failed = [p.to_json() for p in probes if not p.responded]
                results.append(CheckResult(prop, Verdict.VIOLATION if failed else Verdict.PASS, {"violations": failed}))
            else:
                results.append(check_trace(execution, prop, bound))
        run = SimulationRun(current, execution, derive_history(execution), results, replay_execution(execution))
        if run.verdict is not Verdict.PASS:
            logger.warning("seed %d on %s: %s", current, tm, run.to_record())
        report.runs.append(run)
    logger.info("simulate %s: %s", tm, report.summary())
    return report


def measure_lower_bound(kind: str, tm: str = "ref", m: int = 4) -> CostReport:
    tm_cls = get_tm(tm)
    if kind == "quadratic":
        return measure_quadratic(tm_cls, m)
    if kind == "space":
        return measure_final_read_space(tm_cls, m)
    raise ValueError(f"unknown lower bound {kind!r}; choose quadratic or space")


def run_mutex(
    n: int = 2,
    passes: int = 1,
    mode: str = "roundrobin",
    seed: int = 0,
    schedule_path: str | Path | None = None,
    max_steps: int = 200_000,
    models: Iterable[str] = ("wt", "wb", "dsm"),
    exhaustive: bool = False,
    depth: int = DEFAULT_EXPLORE_DEPTH,
) -> MutexReport | MutexExploration:
    if exhaustive:
        return explore_mutex(n, passes, depth)
    if schedule_path:
        schedule = load_schedule(schedule_path)
    elif mode == "random":
        schedule = Schedule.random(seed)
    else:
        schedule = Schedule.round_robin()
    return run_mutex_experiment(n, passes, schedule, max_steps, tuple(models))


class LabTools:
    """Error-dict wrappers around the lab operations"""

    def list_tms(self) -> Dict[str, Any]:
        return {"tms": list_tms()}

    def check_trace(self, trace: str, prop: str, bound: int = DEFAULT_BOUND) -> Dict[str, Any]:
        try:
            return check_trace(trace, prop, bound).to_json()
        except Exception as e:
            return {"error": f"Check error: {e}"}

    def measure_lower_bound(self, kind: str, tm: str = "ref", m: int = 4) -> Dict[str, Any]:
        try:
            report = measure_lower_bound(kind, tm, m)
            return {"summary": report.summary(), "rows": report.to_frame().to_dict("records")}
        except Exception as e:
            return {"error": f"Lower bound error: {e}"}

    def run_mutex_experiment(self, **params: Any) -> Dict[str, Any]:
        try:
            result = run_mutex(**params)
            if isinstance(result, MutexExploration):
                return {
                    **result.summary(),
                    "counterexample": result.counterexamples[0].to_json_lines() if result.counterexamples else None,
                }
            return {"summary": result.summary(), "rmr": result.rmr_frame().to_dict("records")}
        except Exception as e:
            return {"error": f"Mutex error: {e}"}

    def simulate_workload(self, **params: Any) -> Dict[str, Any]:
        try:
            report = simulate(**params)
            return {"summary": report.summary(), "runs": report.to_frame().to_dict("records")}
        except Exception as e:
            return {"error": f"Simulation error: {e}"}
