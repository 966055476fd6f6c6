"""
Stateless exhaustive exploration of scheduling choices.

Every run rebuilds the machines from scratch, follows a recorded prefix of
decisions and then always takes the lowest live process, remembering every
alternative it skipped. Each remembered alternative becomes the prefix of a
later run, so every schedule up to the depth bound is visited exactly once.

With pruning on, a run also stops as soon as it reaches a configuration
(`Simulation.state_key`) already seen at the same or a smaller depth; the
subtree below it has been, or will be, explored from that earlier visit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping

from .execution import Execution
from .memory import Memory
from .scheduler import Simulation, StepMachine

logger = logging.getLogger(__name__)

Builder = Callable[[], "tuple[Memory, Mapping[int, StepMachine]]"]


@dataclass
class ExplorationStats:
    runs: int = 0
    truncated_runs: int = 0
    pruned_runs: int = 0
    states: int = 0
    longest: int = 0
    stopped_early: bool = False


def explore_schedules(
    build: Builder,
    max_depth: int,
    visit: Callable[[Execution], bool | None],
    max_runs: int | None = None,
    prune: bool = False,
) -> ExplorationStats:
    """Visit one execution per leaf of the schedule tree.

    `visit` may return True to stop the exploration (a counterexample was
    found). Runs cut by `max_depth` are counted as truncated. `prune` merges
    runs that reach the same configuration; it needs hashable object values
    and machines whose behaviour depends only on the responses they receive.
    """
    stats = ExplorationStats()
    seen: dict[Hashable, int] = {}
    pending: list[tuple[int, ...]] = [()]
    while pending:
        if max_runs is not None and stats.runs >= max_runs:
            stats.stopped_early = True
            break
        prefix = pending.pop()
        memory, machines = build()
        simulation = Simulation(memory, machines)
        branches: list[tuple[int, ...]] = []
        cut: list[int] = []

        def choose(live, k, prefix=prefix, simulation=simulation, branches=branches, cut=cut):
            if k < len(prefix):
                return prefix[k]
            if prune:
                key = simulation.state_key()
                if seen.get(key, max_depth + 1) <= k:
                    cut.append(k)
                    return None
                seen[key] = k
            taken = tuple(simulation.decisions)
            for alternative in live[1:]:
                branches.append(taken + (alternative,))
            return live[0]

        execution = simulation.run(choose, max_depth)
        pending.extend(reversed(branches))
        stats.runs += 1
        stats.longest = max(stats.longest, len(execution.decisions))
        if execution.truncated:
            stats.truncated_runs += 1
        if cut:
            stats.pruned_runs += 1
        if visit(execution):
            stats.stopped_early = True
            break

    stats.states = len(seen)
    logger.info(
        "explored %d runs (%d truncated at depth %d, %d pruned)",
        stats.runs,
        stats.truncated_runs,
        max_depth,
        stats.pruned_runs,
    )
    return stats
