"""Progressiveness and strong progressiveness of histories."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import networkx as nx

from tm import History, TObjectId, TxnId, concurrent, conflicts

from .errors import BoundExceededError

logger = logging.getLogger(__name__)

DEFAULT_STRONG_BOUND = 12


def check_progressiveness(history: History) -> list[TxnId]:
    """Aborted transactions with no concurrent conflicting transaction"""
    orphans = []
    txns = history.txns()
    for t in txns:
        if not history.view(t).aborted:
            continue
        if not any(concurrent(history, t, u) and conflicts(history, t, u) for u in txns if u != t):
            orphans.append(t)
    return orphans


@dataclass(frozen=True)
class ConflictPartition:
    """A conflict-closed set of transactions and the t-objects they conflict on"""

    members: frozenset[TxnId]
    cobj: frozenset[TObjectId]

    def to_json(self) -> dict:
        return {"members": sorted(t.k for t in self.members), "cobj": sorted(self.cobj)}


def transaction_conflict_graph(history: History) -> nx.Graph:
    """Undirected graph of transactions, with an edge per concurrent conflict"""
    graph = nx.Graph()
    txns = history.txns()
    graph.add_nodes_from(txns)
    for a, b in itertools.combinations(txns, 2):
        shared = conflicts(history, a, b)
        if shared:
            graph.add_edge(a, b, objects=shared)
    return graph


def conflict_components(history: History) -> list[ConflictPartition]:
    """The minimal conflict-closed sets; every closed set is a union of these"""
    graph = transaction_conflict_graph(history)
    parts = []
    for component in nx.connected_components(graph):
        cobj = frozenset().union(*(data["objects"] for _, _, data in graph.subgraph(component).edges(data=True)))
        parts.append(ConflictPartition(frozenset(component), cobj))
    return sorted(parts, key=lambda p: min(t.k for t in p.members))


def check_strong_progressiveness(history: History, bound: int = DEFAULT_STRONG_BOUND) -> list[ConflictPartition]:
    """Conflict-closed sets Q with |CObj(Q)| <= 1 whose members all aborted.

    A union that mixes in a component with a surviving member, or whose
    conflicts span two objects, can never violate, so only all-aborted
    components with at most one conflict object are combined.
    """
    txns = history.txns()
    if len(txns) > bound:
        raise BoundExceededError(len(txns), bound)

    candidates = [
        part
        for part in conflict_components(history)
        if len(part.cobj) <= 1 and all(history.view(t).aborted for t in part.members)
    ]
    violations = []
    for size in range(1, len(candidates) + 1):
        for group in itertools.combinations(candidates, size):
            cobj = frozenset().union(*(p.cobj for p in group))
            if len(cobj) <= 1:
                violations.append(ConflictPartition(frozenset().union(*(p.members for p in group)), cobj))
    if violations:
        logger.info("%d strong-progressiveness violations", len(violations))
    return violations
