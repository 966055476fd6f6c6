"""Invisible reads: t-reads that apply no nontrivial primitive."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from sim import Execution, RmwEvent
from tm import TOpKind, TxnId, concurrent, derive_history


class InvisibleReadsMode(str, Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class InvisibleReadViolation:
    txn: TxnId
    top: int
    event: int

    def to_json(self) -> dict:
        return {"txn": self.txn.k, "top": self.top, "event": self.event}


def check_invisible_reads(execution: Execution, mode: InvisibleReadsMode | str = InvisibleReadsMode.WEAK) -> list[InvisibleReadViolation]:
    """WEAK covers transactions with a read set that run concurrently with no
    other transaction; STRONG covers every t-read of read-only transactions."""
    mode = InvisibleReadsMode(mode)
    history = derive_history(execution)
    txns = history.txns()

    checked_reads: set[int] = set()
    for t in txns:
        view = history.view(t)
        if mode is InvisibleReadsMode.STRONG:
            applies = view.read_only
        else:
            applies = bool(view.rset) and not any(concurrent(history, t, u) for u in txns if u != t)
        if applies:
            checked_reads.update(op.top for op in view.ops if op.kind is TOpKind.READ)

    violations = []
    for record in execution.records:
        if isinstance(record, RmwEvent) and record.top in checked_reads and record.nontrivial:
            violations.append(InvisibleReadViolation(record.txn, record.top, record.seq))
    return violations
