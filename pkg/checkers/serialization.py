"""
Opacity and strict serializability by exhaustive serialization search.

A history is checked against every completion (commit-pending transactions
may commit or abort, other unfinished transactions abort). For each
completion a depth-first search places transactions one at a time, only
after all their real-time predecessors, replaying them t-sequentially. Failed
(placed set, t-object state) pairs are memoized, so equivalent prefixes are
never searched twice.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator, Mapping

from tm import ABORTED, COMMITTED, History, Outcome, TOpKind, TxnId, TxnView, real_time_precedes

from .errors import BoundExceededError

logger = logging.getLogger(__name__)

DEFAULT_BOUND = 8


class CheckMode(str, Enum):
    OPACITY = "opacity"
    STRICT = "strict-ser"


@dataclass(frozen=True)
class SerializationWitness:
    order: tuple[TxnId, ...]
    completion: Mapping[TxnId, Outcome]

    def to_json(self) -> dict:
        return {
            "order": [t.k for t in self.order],
            "completion": {str(t.k): o.value for t, o in sorted(self.completion.items())},
        }


def completions(history: History) -> Iterator[dict[TxnId, Outcome]]:
    """Every way of completing the history"""
    txns = history.txns()
    base = {t: COMMITTED if history.view(t).committed else ABORTED for t in txns}
    pending = [t for t in txns if history.view(t).commit_pending]
    for choice in itertools.product((COMMITTED, ABORTED), repeat=len(pending)):
        yield {**base, **dict(zip(pending, choice))}


def apply_transaction(
    history: History, view: TxnView, state: Mapping[str, Any], committed: bool
) -> dict[str, Any] | None:
    """Replay one transaction on `state`; None if one of its reads is illegal"""
    local: dict[str, Any] = {}
    for op in view.ops:
        if op.kind is TOpKind.WRITE:
            local[op.obj] = op.arg
        elif op.kind is TOpKind.READ and not op.pending and op.outcome is not ABORTED:
            if op.obj in local:
                expected = local[op.obj]
            else:
                expected = state.get(op.obj, history.initial_value(op.obj))
            if op.outcome != expected:
                return None
    if not committed:
        return dict(state)
    return {**state, **local}


def _freeze(state: Mapping[str, Any]) -> tuple:
    return tuple(sorted(state.items(), key=lambda item: item[0]))


def _place(history: History, members: list[TxnId], completion: Mapping[TxnId, Outcome]) -> list[TxnId] | None:
    preds = {t: frozenset(u for u in members if real_time_precedes(history, u, t)) for t in members}
    failed: set = set()
    order: list[TxnId] = []

    def dfs(placed: frozenset, state: dict) -> bool:
        if len(placed) == len(members):
            return True
        key = (placed, _freeze(state))
        if key in failed:
            return False
        for t in members:
            if t in placed or not preds[t] <= placed:
                continue
            after = apply_transaction(history, history.view(t), state, completion[t] is COMMITTED)
            if after is None:
                continue
            order.append(t)
            if dfs(placed | {t}, after):
                return True
            order.pop()
        failed.add(key)
        return False

    return order if dfs(frozenset(), {}) else None


def find_serialization(history: History, mode: CheckMode | str, bound: int = DEFAULT_BOUND) -> SerializationWitness | None:
    """Search for a legal serialization under `mode`; None when none exists"""
    mode = CheckMode(mode)
    txns = history.txns()
    if len(txns) > bound:
        raise BoundExceededError(len(txns), bound)

    # transactions that finished earlier are tried first
    ordered = sorted(txns, key=lambda t: (history.view(t).last_index, t.k))
    for completion in completions(history):
        if mode is CheckMode.OPACITY:
            members = ordered
        else:
            members = [t for t in ordered if completion[t] is COMMITTED]
        order = _place(history, members, completion)
        if order is not None:
            return SerializationWitness(tuple(order), {t: completion[t] for t in members})
    logger.info("no %s serialization for %d transactions", mode.value, len(txns))
    return None


def check_strict_serializability(history: History, bound: int = DEFAULT_BOUND) -> SerializationWitness | None:
    """A witness order when the history is strictly serializable, else None"""
    return find_serialization(history, CheckMode.STRICT, bound)


def check_opacity(history: History, bound: int = DEFAULT_BOUND) -> SerializationWitness | None:
    """A witness order when the history is opaque, else None"""
    return find_serialization(history, CheckMode.OPACITY, bound)


def validate_witness(history: History, witness: SerializationWitness, mode: CheckMode | str) -> bool:
    """Independently replay a witness against the history it claims to serialize"""
    mode = CheckMode(mode)
    order = list(witness.order)
    if len(set(order)) != len(order):
        return False

    for t in history.txns():
        view = history.view(t)
        chosen = witness.completion.get(t)
        if view.committed and chosen not in (None, COMMITTED):
            return False
        if view.aborted and chosen not in (None, ABORTED):
            return False
        if not view.t_complete and not view.commit_pending and chosen not in (None, ABORTED):
            return False

    if mode is CheckMode.OPACITY:
        expected = set(history.txns())
    else:
        expected = {t for t in history.txns() if witness.completion.get(t, ABORTED) is COMMITTED}
    if set(order) != expected:
        return False

    position = {t: i for i, t in enumerate(order)}
    for a in order:
        for b in order:
            if real_time_precedes(history, a, b) and position[a] > position[b]:
                return False

    memory: dict[str, Any] = {}
    for t in order:
        written: dict[str, Any] = {}
        for op in history.view(t).ops:
            if op.kind is TOpKind.WRITE:
                written[op.obj] = op.arg
                continue
            if op.kind is not TOpKind.READ or op.pending or op.outcome is ABORTED:
                continue
            latest = written.get(op.obj, memory.get(op.obj, history.initial_value(op.obj)))
            if latest != op.outcome:
                return False
        if witness.completion.get(t) is COMMITTED:
            memory.update(written)
    return True
