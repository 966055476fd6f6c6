"""
Step and footprint measurements over the execution families.

A t-operation's steps are the rmw events between its invocation and its
response; markers cost nothing. Distinct objects count every base object
touched, trivial accesses included.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any

import pandas as pd

from checkers import check_strict_serializability
from sim import Execution, RmwEvent
from tm import ABORTED, TransactionalMemory

from .families import (
    T_READER,
    build_final_read_execution,
    build_fresh_read_execution,
    new_value,
    tobject,
)

logger = logging.getLogger(__name__)

QUADRATIC_COLUMNS = ["i", "steps", "distinctObjects", "foreignObjects", "cumulativeSteps", "analyticBound", "pass"]
SPACE_COLUMNS = [
    "i",
    "steps",
    "distinctObjects",
    "analyticBound",
    "readOutcome",
    "tryCOutcome",
    "consistent",
    "serializable",
    "pass",
]


def op_cost(execution: Execution, top: int, own: str | None = None) -> tuple[int, set, set]:
    """(steps, distinct objects, objects not belonging to t-object `own`)"""
    events = [r for r in execution.records if isinstance(r, RmwEvent) and r.top == top]
    objects = {e.object for e in events}
    foreign = {o for o in objects if own is None or execution.name_of(o).split(".")[0] != own}
    return len(events), objects, foreign


@dataclass
class CostRow:
    i: int
    steps: int
    distinct_objects: int
    analytic_bound: int
    passed: bool
    foreign_objects: int = 0
    cumulative_steps: int = 0
    read_outcome: Any = None
    tryc_outcome: Any = None
    consistent: bool = True
    serializable: bool = True

    def to_record(self, columns: list[str]) -> dict:
        values = {
            "i": self.i,
            "steps": self.steps,
            "distinctObjects": self.distinct_objects,
            "foreignObjects": self.foreign_objects,
            "cumulativeSteps": self.cumulative_steps,
            "analyticBound": self.analytic_bound,
            "readOutcome": _outcome_text(self.read_outcome),
            "tryCOutcome": _outcome_text(self.tryc_outcome),
            "consistent": self.consistent,
            "serializable": self.serializable,
            "pass": self.passed,
        }
        return {c: values[c] for c in columns}


def _outcome_text(outcome: Any) -> str:
    if outcome is None:
        return "-"
    return str(outcome)


@dataclass
class CostReport:
    kind: str
    tm: str
    m: int
    rows: list[CostRow] = field(default_factory=list)
    total_steps: int = 0
    total_bound: int = 0
    constant: float = 0.0
    monotone: bool = True
    within_tightness: bool | None = None

    @property
    def columns(self) -> list[str]:
        """Report columns in output order"""
        return QUADRATIC_COLUMNS if self.kind == "quadratic" else SPACE_COLUMNS

    @property
    def passed(self) -> bool:
        """Every row met its expectation; quadratic reports also need the total bound and tightness"""
        rows_ok = all(row.passed for row in self.rows)
        if self.kind == "quadratic":
            return rows_ok and self.total_steps >= self.total_bound and self.within_tightness is not False
        return rows_ok

    def to_frame(self) -> pd.DataFrame:
        """One row per measured read"""
        return pd.DataFrame([row.to_record(self.columns) for row in self.rows], columns=self.columns)

    def summary(self) -> dict:
        """Totals and the pass verdict"""
        data = asdict(self)
        data.pop("rows")
        data["passed"] = self.passed
        return data


def measure_quadratic(tm_cls: type[TransactionalMemory], m: int) -> CostReport:
    """Cost of the reader's i-th read in the fresh-read family, for i = 1..m"""
    if m < 2:
        raise ValueError("m must be at least 2")
    report = CostReport("quadratic", tm_cls.name, m)
    cumulative = 0
    for i in range(1, m + 1):
        run = build_fresh_read_execution(tm_cls, i)
        steps, objects, foreign = op_cost(run.execution, run.read_op(i).top, own=tobject(i))
        cumulative += steps
        report.rows.append(
            CostRow(
                i=i,
                steps=steps,
                distinct_objects=len(objects),
                foreign_objects=len(foreign),
                cumulative_steps=cumulative,
                analytic_bound=i - 1,
                passed=len(foreign) >= i - 1,
                read_outcome=run.read_outcome,
            )
        )

    report.total_steps = cumulative
    report.total_bound = m * (m - 1) // 2
    report.constant = cumulative / (m * m)
    later = [row.steps for row in report.rows[1:]]
    report.monotone = all(a <= b for a, b in zip(later, later[1:]))
    limit = getattr(tm_cls, "TIGHTNESS_CONSTANT", None)
    if limit is not None:
        report.within_tightness = report.constant <= limit
    logger.info("quadratic %s m=%d: total %d steps (bound %d, C=%.2f)", tm_cls.name, m, cumulative, report.total_bound, report.constant)
    return report


def measure_final_read_space(tm_cls: type[TransactionalMemory], m: int) -> CostReport:
    """Distinct base objects the reader touches in its m-th read plus tryC, per ell"""
    if m < 2:
        raise ValueError("m must be at least 2")
    report = CostReport("space", tm_cls.name, m)
    for ell in range(1, m):
        run = build_final_read_execution(tm_cls, m, ell)
        events = run.events_of(T_READER, "final")
        objects = {e.object for e in events}
        saw_new = run.read_outcome == new_value(m)
        consistent = not saw_new or run.tryc_outcome is ABORTED
        serializable = check_strict_serializability(run.history) is not None
        report.rows.append(
            CostRow(
                i=ell,
                steps=len(events),
                distinct_objects=len(objects),
                analytic_bound=m - 1,
                passed=len(objects) >= m - 1 and consistent and serializable,
                read_outcome=run.read_outcome,
                tryc_outcome=run.tryc_outcome,
                consistent=consistent,
                serializable=serializable,
            )
        )
        if not consistent:
            logger.warning("ell=%d: read returned nv but tryC returned %s", ell, run.tryc_outcome)
    report.total_steps = sum(row.steps for row in report.rows)
    return report
