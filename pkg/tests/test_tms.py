import pytest

from checkers import check_opacity, check_strict_serializability, check_strong_progressiveness
from sim import Access, Memory, Schedule, Simulation
from sim.scheduler import make_chooser
from tm import (
    ABORTED,
    COMMITTED,
    SP1TM,
    TM_REGISTRY,
    LazyTM,
    LockWord,
    RefTM,
    TMUsageError,
    TOpKind,
    TOpSpec,
    TxnId,
    derive_history,
    get_tm,
    workload_builder,
)

READ_X1_THEN_X2 = {0: [(TOpSpec.read("X1"), TOpSpec.read("X2"))]}
WRITE_BOTH = {1: [(TOpSpec.write("X1", 1), TOpSpec.write("X2", 1))]}
# T1 reads X1, T2 overwrites both t-objects and commits, then T1 reads X2
INTERLEAVED = [0, 0, 0] + [1] * 20 + [0] * 20


def run(tm_cls, workload, steps):
    memory, machines = workload_builder(tm_cls, workload)()
    simulation = Simulation(memory, machines)
    execution = simulation.run(make_chooser(Schedule.scripted(steps), simulation.processes), 1000)
    return simulation, execution


def read_steps(execution):
    history = derive_history(execution)
    return [
        sum(1 for e in execution.events if e.top == op.top)
        for op in history.ops
        if op.kind is TOpKind.READ
    ]


def test_registry():
    assert set(TM_REGISTRY) == {"ref", "sp1", "lazy"}
    assert get_tm("lazy") is LazyTM
    with pytest.raises(ValueError, match="unknown TM"):
        get_tm("tl2")


def test_ref_solo_write_then_read():
    workload = {0: [(TOpSpec.write("X1", 7),), (TOpSpec.read("X1"),)]}
    simulation, execution = run(RefTM, workload, [0] * 30)
    first, second = simulation.result(0)
    assert first.outcome is COMMITTED and second.outcome is COMMITTED
    assert second.reads == {"X1": 7}
    lock = next(obj for obj, name in execution.names.items() if name == "X1.lock")
    assert simulation.memory.value(lock) == LockWord(1, False, None)


def test_ref_read_validates_every_earlier_read():
    workload = {0: [(TOpSpec.read("X1"), TOpSpec.read("X2"), TOpSpec.read("X3"))]}
    _, execution = run(RefTM, workload, [0] * 30)
    assert read_steps(execution) == [3, 4, 5]


def test_lazy_reads_cost_three_steps():
    workload = {0: [(TOpSpec.read("X1"), TOpSpec.read("X2"), TOpSpec.read("X3"))]}
    _, execution = run(LazyTM, workload, [0] * 30)
    assert read_steps(execution) == [3, 3, 3]


def test_ref_aborts_inconsistent_read():
    simulation, execution = run(RefTM, {**READ_X1_THEN_X2, **WRITE_BOTH}, INTERLEAVED)
    [reader] = simulation.result(0)
    [writer] = simulation.result(1)
    assert writer.outcome is COMMITTED
    assert reader.outcome is ABORTED
    assert reader.reads == {"X1": 0}
    history = derive_history(execution)
    assert check_opacity(history) is not None


def test_lazy_returns_inconsistent_read_then_aborts():
    simulation, execution = run(LazyTM, {**READ_X1_THEN_X2, **WRITE_BOTH}, INTERLEAVED)
    [reader] = simulation.result(0)
    assert reader.reads == {"X1": 0, "X2": 1}
    assert reader.outcome is ABORTED
    history = derive_history(execution)
    assert check_opacity(history) is None
    assert check_strict_serializability(history) is not None


def test_ref_concurrent_writers_one_commits():
    workload = {0: [(TOpSpec.write("X1", 1),)], 1: [(TOpSpec.write("X1", 2),)]}
    simulation, _ = run(RefTM, workload, [0, 1] * 20)
    outcomes = {simulation.result(0)[0].outcome, simulation.result(1)[0].outcome}
    assert COMMITTED in outcomes


def test_sp1_single_object_only():
    tm = SP1TM(Memory(models=()), {"X1": 0, "X2": 0})
    tx = tm.begin(TxnId(1, 0))
    fragment = tm.read(tx, "X1")
    assert isinstance(next(fragment), Access)
    with pytest.raises(StopIteration) as stop:
        fragment.send((0, 0))
    assert stop.value.value == 0
    with pytest.raises(TMUsageError):
        next(tm.read(tx, "X2"))
    with pytest.raises(TMUsageError):
        next(tm.write(tx, "X2", 1))


def test_sp1_cas_loser_aborts():
    workload = {0: [(TOpSpec.read("X1"), TOpSpec.write("X1", 1))], 1: [(TOpSpec.write("X1", 2),)]}
    simulation, execution = run(SP1TM, workload, [0] + [1] * 10 + [0] * 10)
    assert simulation.result(1)[0].outcome is COMMITTED
    assert simulation.result(0)[0].outcome is ABORTED
    history = derive_history(execution)
    assert check_strict_serializability(history) is not None
    assert check_strong_progressiveness(history) == []
