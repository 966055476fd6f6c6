"""
Weak disjoint-access parallelism.

Two transactions concurrently contend on a base object at a prefix of the
execution when both are poised (their next record is an rmw event) on that
object and at least one of the two primitives is nontrivial. Weak DAP allows
that only when the transactions share a t-object, or when their data sets are
connected in the conflict graph built from the transactions concurrent with
either of them.
"""

from __future__ import annotations

import bisect
import itertools
import logging
from dataclasses import dataclass

import networkx as nx

from sim import BaseObjectId, Execution, RmwEvent
from tm import History, TxnId, concurrent, derive_history

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DapViolation:
    first: TxnId
    second: TxnId
    obj: BaseObjectId
    index: int

    def to_json(self) -> dict:
        return {"txns": [self.first.k, self.second.k], "object": self.obj, "prefix": self.index}


def tau(history: History, ti: TxnId, tj: TxnId) -> set[TxnId]:
    """ti, tj and every transaction concurrent with either"""
    members = {ti, tj}
    for t in history.txns():
        if concurrent(history, t, ti) or concurrent(history, t, tj):
            members.add(t)
    return members


def conflict_graph(history: History, ti: TxnId, tj: TxnId) -> nx.Graph:
    """T-objects as nodes; each transaction in tau links every pair of objects in its data set"""
    graph = nx.Graph()
    for t in sorted(tau(history, ti, tj)):
        dset = sorted(history.view(t).dset)
        graph.add_nodes_from(dset)
        graph.add_edges_from(itertools.combinations(dset, 2))
    return graph


def disjoint_access(history: History, ti: TxnId, tj: TxnId) -> bool:
    """No path between the two data sets in the conflict graph"""
    graph = conflict_graph(history, ti, tj)
    di, dj = history.view(ti).dset, history.view(tj).dset
    return not any(nx.has_path(graph, x, y) for x in di for y in dj)


def concurrent_contention(execution: Execution) -> list[tuple[int, TxnId, TxnId, BaseObjectId]]:
    """Every (prefix length, Ti, Tj, b) where Ti and Tj concurrently contend on b"""
    positions: dict[TxnId, list[int]] = {}
    for index, record in enumerate(execution.records):
        if record.txn is not None:
            positions.setdefault(record.txn, []).append(index)

    found = []
    for p in range(len(execution.records)):
        poised: dict[TxnId, RmwEvent] = {}
        for txn, where in positions.items():
            if where[0] >= p:
                continue
            nxt = bisect.bisect_left(where, p)
            if nxt < len(where):
                record = execution.records[where[nxt]]
                if isinstance(record, RmwEvent):
                    poised[txn] = record
        for (ti, ei), (tj, ej) in itertools.combinations(sorted(poised.items()), 2):
            if ei.object == ej.object and (ei.nontrivial or ej.nontrivial):
                found.append((p, ti, tj, ei.object))
    return found


def check_weak_dap(execution: Execution) -> list[DapViolation]:
    """Pairs with disjoint data sets that still contended on a base object"""
    violations = []
    reported: set[tuple[TxnId, TxnId]] = set()
    prefixes: dict[int, History] = {}
    for p, ti, tj, obj in concurrent_contention(execution):
        if (ti, tj) in reported:
            continue
        if p not in prefixes:
            prefixes[p] = derive_history(execution.prefix(p))
        history = prefixes[p]
        if history.view(ti).dset & history.view(tj).dset:
            continue
        if not disjoint_access(history, ti, tj):
            continue
        reported.add((ti, tj))
        violations.append(DapViolation(ti, tj, obj, p))
        logger.info("weak DAP violation: %s and %s contend on %s at %d", ti, tj, execution.name_of(obj), p)
    return violations
