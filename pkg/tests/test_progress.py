import pytest

from checkers import BoundExceededError, check_progressiveness, check_strong_progressiveness, conflict_components
from histories import build_history
from sim import Schedule, run_schedule
from tm import RefTM, TOpSpec, TxnId, derive_history, random_workload, workload_builder

from conftest import AlwaysAbortTM


def T(k):
    return TxnId(k, k)


def test_lonely_abort_is_an_orphan():
    history = build_history([("R", 1, "x", 0), ("A", 1)])
    assert check_progressiveness(history) == [T(1)]


def test_abort_with_concurrent_conflict_is_allowed():
    history = build_history([("R", 1, "x", 0), ("W", 2, "x", 1), ("C", 2), ("A", 1)])
    assert check_progressiveness(history) == []


def test_abort_after_conflicting_writer_finished_is_an_orphan():
    history = build_history([("W", 2, "x", 1), ("C", 2), ("R", 1, "x", 1), ("A", 1)])
    assert check_progressiveness(history) == [T(1)]


def test_always_abort_tm_is_not_progressive():
    build = workload_builder(AlwaysAbortTM, {0: [(TOpSpec.read("X1"),)]})
    memory, machines = build()
    execution = run_schedule(memory, machines, Schedule.round_robin(), 100)
    assert check_progressiveness(derive_history(execution)) == [TxnId(1, 0)]


@pytest.mark.parametrize("seed", range(5))
def test_ref_tm_is_progressive(seed):
    workload = random_workload(seed, processes=2, txns_per_process=2, objects=2)
    memory, machines = workload_builder(RefTM, workload)()
    execution = run_schedule(memory, machines, Schedule.random(seed), 10_000)
    assert not execution.truncated
    assert check_progressiveness(derive_history(execution)) == []


def test_conflict_components():
    history = build_history(
        [("W", 1, "x", 1), ("R", 2, "x", 0), ("W", 3, "y", 1), ("R", 4, "z", 0), ("C", 1), ("C", 2), ("C", 3), ("C", 4)]
    )
    parts = conflict_components(history)
    assert [sorted(t.k for t in p.members) for p in parts] == [[1, 2], [3], [4]]
    assert parts[0].cobj == frozenset({"x"})
    assert parts[0].to_json() == {"members": [1, 2], "cobj": ["x"]}


def test_both_aborted_on_one_object_violates():
    history = build_history(
        [("R", 1, "x", 0), ("R", 2, "x", 0), ("W", 1, "x", 1), ("W", 2, "x", 2), ("A", 1), ("A", 2)]
    )
    violations = check_strong_progressiveness(history)
    assert len(violations) == 1
    assert violations[0].members == frozenset({T(1), T(2)})


def test_one_survivor_satisfies():
    history = build_history(
        [("R", 1, "x", 0), ("R", 2, "x", 0), ("W", 1, "x", 1), ("W", 2, "x", 2), ("C", 1), ("A", 2)]
    )
    assert check_strong_progressiveness(history) == []


def test_conflicts_on_two_objects_may_all_abort():
    history = build_history(
        [("R", 1, "x", 0), ("R", 2, "y", 0), ("W", 1, "y", 1), ("W", 2, "x", 1), ("A", 1), ("A", 2)]
    )
    assert check_strong_progressiveness(history) == []


def test_strong_progressiveness_bound():
    steps = []
    for k in range(1, 14):
        steps += [("R", k, "x", 0), ("C", k)]
    with pytest.raises(BoundExceededError):
        check_strong_progressiveness(build_history(steps))
