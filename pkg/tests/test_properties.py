"""Randomized and exhaustive property runs for the shipped TMs and the mutex."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from checkers import (
    check_invisible_reads,
    check_opacity,
    check_progressiveness,
    check_strict_serializability,
    check_strong_progressiveness,
    check_weak_dap,
)
from harness import build_stale_snapshot_execution
from mutex import run_mutex_experiment
from sim import Schedule, explore_schedules, replay_execution, run_schedule
from tm import ABORTED, SP1TM, RefTM, TOpSpec, derive_history, random_workload, workload_builder

seeds = st.integers(min_value=0, max_value=10_000)


def random_run(tm_cls, seed, single_object=False):
    workload = random_workload(seed, processes=2, txns_per_process=2, objects=2, single_object=single_object)
    memory, machines = workload_builder(tm_cls, workload)()
    return run_schedule(memory, machines, Schedule.random(seed), 10_000)


@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_ref_random_schedules(seed):
    execution = random_run(RefTM, seed)
    history = derive_history(execution)
    assert not execution.truncated
    assert replay_execution(execution) == []
    assert check_opacity(history) is not None
    assert check_progressiveness(history) == []
    assert check_weak_dap(execution) == []
    assert check_invisible_reads(execution) == []


@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_sp1_random_schedules(seed):
    execution = random_run(SP1TM, seed, single_object=True)
    history = derive_history(execution)
    assert check_strict_serializability(history) is not None
    assert check_strong_progressiveness(history) == []


def test_ref_every_interleaving_of_two_transactions():
    workload = {0: [(TOpSpec.read("X1"), TOpSpec.write("X1", 1))], 1: [(TOpSpec.write("X1", 2),)]}
    bad = []

    def visit(execution):
        if check_opacity(derive_history(execution)) is None:
            bad.append(execution)
            return True
        return False

    stats = explore_schedules(workload_builder(RefTM, workload, models=()), 60, visit)
    assert bad == []
    assert stats.truncated_runs == 0
    assert stats.runs > 100


SINGLE_OBJECT_WORKLOADS = {
    "read-write-vs-write": {0: [(TOpSpec.read("X1"), TOpSpec.write("X1", 1))], 1: [(TOpSpec.write("X1", 2),)]},
    "reader-vs-two-writers": {
        0: [(TOpSpec.read("X1"),)],
        1: [(TOpSpec.write("X1", 2),)],
        2: [(TOpSpec.write("X1", 3),)],
    },
}


@pytest.mark.parametrize("name", sorted(SINGLE_OBJECT_WORKLOADS))
def test_sp1_every_interleaving(name):
    bad = []

    def visit(execution):
        history = derive_history(execution)
        if check_opacity(history) is None or check_strong_progressiveness(history):
            bad.append(execution)
            return True
        return False

    stats = explore_schedules(workload_builder(SP1TM, SINGLE_OBJECT_WORKLOADS[name], models=()), 60, visit)
    assert bad == []
    assert stats.truncated_runs == 0
    assert stats.runs >= 10


@pytest.mark.parametrize("i,ell", [(i, ell) for i in range(2, 6) for ell in range(1, i)])
def test_stale_snapshot_never_returns_new_value(i, ell):
    run = build_stale_snapshot_execution(RefTM, i, ell)
    assert run.read_outcome is ABORTED or run.read_outcome == 0
    assert check_opacity(run.history) is not None


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_mutex_overhead_does_not_grow_with_n(n):
    report = run_mutex_experiment(n, 2, Schedule.round_robin())
    assert report.safe and report.all_completed
    assert report.max_spin_rmr("dsm") == 0
    assert report.max_passage_rmr("dsm") <= 3
    for model in ("wt", "wb"):
        assert report.max_passage_rmr(model) <= 12


@pytest.mark.parametrize("seed", range(3))
def test_mutex_overhead_under_random_schedules_at_sixteen(seed):
    report = run_mutex_experiment(16, 2, Schedule.random(seed))
    assert report.safe and report.all_completed
    assert report.max_spin_rmr("dsm") == 0
    assert report.max_passage_rmr("dsm") <= 3
    for model in ("wt", "wb"):
        assert report.max_passage_rmr(model) <= 12
