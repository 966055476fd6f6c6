"""
Second serializability oracle: plain enumeration of every completion and every
permutation, in reverse lexicographic order of transaction ids. Only meant for
small histories; it shares no search code with the main checker.
"""

from __future__ import annotations

import itertools
from typing import Any

from tm import ABORTED, History, TOpKind

from .errors import BoundExceededError
from .serialization import CheckMode

ORACLE_BOUND = 6


def _legal(history: History, order, committed: set) -> bool:
    values: dict[str, Any] = {}
    for t in order:
        mine: dict[str, Any] = {}
        for op in history.view(t).ops:
            if op.kind is TOpKind.WRITE:
                mine[op.obj] = op.arg
            elif op.kind is TOpKind.READ and op.resp_index is not None and op.outcome is not ABORTED:
                if op.obj in mine:
                    seen = mine[op.obj]
                elif op.obj in values:
                    seen = values[op.obj]
                else:
                    seen = history.initial_value(op.obj)
                if seen != op.outcome:
                    return False
        if t in committed:
            values.update(mine)
    return True


def _respects_real_time(history: History, order) -> bool:
    for i, later in enumerate(order):
        first = history.view(later).first_index
        for earlier in order[i + 1:]:
            view = history.view(earlier)
            if view.t_complete and view.last_index < first:
                return False
    return True


def brute_force_serializable(history: History, mode: CheckMode | str = CheckMode.STRICT) -> bool:
    """Try every permutation of the transactions; small histories only"""
    mode = CheckMode(mode)
    txns = sorted(history.views, key=lambda t: t.k, reverse=True)
    if len(txns) > ORACLE_BOUND:
        raise BoundExceededError(len(txns), ORACLE_BOUND)

    undecided = [t for t in txns if history.view(t).commit_pending]
    always = {t for t in txns if history.view(t).committed}
    for bits in itertools.product((True, False), repeat=len(undecided)):
        committed = always | {t for t, bit in zip(undecided, bits) if bit}
        members = txns if mode is CheckMode.OPACITY else [t for t in txns if t in committed]
        for order in itertools.permutations(members):
            if _respects_real_time(history, order) and _legal(history, order, committed):
                return True
    return False


def brute_force_strict_serializability(history: History) -> bool:
    """Permutation oracle for strict serializability"""
    return brute_force_serializable(history, CheckMode.STRICT)
