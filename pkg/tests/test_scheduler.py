from dataclasses import replace

import pytest

from sim import (
    Access,
    Execution,
    Invoke,
    Mark,
    Memory,
    PrimitiveOp,
    Respond,
    Schedule,
    ScheduleError,
    Simulation,
    replay_execution,
    run_schedule,
)
from sim.memory import MarkerKind


def writer(obj, *values):
    for value in values:
        yield Access(obj, PrimitiveOp.write(value))


def spinner(obj):
    while (yield Access(obj, PrimitiveOp.read())) == 0:
        pass


def fresh_memory(count=2):
    mem = Memory()
    for obj in range(count):
        mem.add_object(obj, 0, owner=obj)
    return mem


def test_single_writer_round_robin():
    execution = run_schedule(fresh_memory(1), {0: writer(0, 1)}, Schedule.round_robin(), 100)
    assert len(execution.events) == 1
    assert execution.events[0].primitive == PrimitiveOp.write(1)
    assert not execution.truncated


def test_scripted_interleaving_alternates():
    machines = {1: writer(0, 1, 2), 2: writer(1, 3, 4)}
    mem = Memory()
    mem.add_object(0, 0, owner=1)
    mem.add_object(1, 0, owner=2)
    execution = run_schedule(mem, machines, Schedule.scripted([1, 2, 1, 2]), 100)
    assert [e.process for e in execution.events] == [1, 2, 1, 2]


def test_random_schedule_is_reproducible():
    def run(seed):
        machines = {0: writer(0, 1, 2, 3), 1: writer(1, 4, 5, 6)}
        return run_schedule(fresh_memory(), machines, Schedule.random(seed), 100)

    assert run(7).dumps() == run(7).dumps()
    assert run(7).decisions == run(7).decisions


def test_completed_process_records_noop():
    machines = {0: writer(0, 1), 1: writer(1, 2, 3)}
    execution = run_schedule(fresh_memory(), machines, Schedule.scripted([0, 0, 1, 1]), 100)
    noops = [r for r in execution.markers if r.kind is MarkerKind.NOOP]
    assert [r.process for r in noops] == [0]
    assert [e.process for e in execution.events] == [0, 1, 1]
    assert execution.decisions == (0, 0, 1, 1)


def test_run_stops_once_every_process_completed():
    execution = run_schedule(fresh_memory(1), {0: writer(0, 1)}, Schedule.scripted([0, 0]), 100)
    assert execution.markers == []
    assert execution.decisions == (0,)
    assert not execution.truncated


def test_max_steps_flags_truncation():
    execution = run_schedule(fresh_memory(1), {0: spinner(0)}, Schedule.round_robin(), 10)
    assert execution.truncated
    assert len(execution.decisions) == 10
    assert len(execution.events) == 10


def test_unknown_process_in_schedule():
    with pytest.raises(ScheduleError):
        run_schedule(fresh_memory(1), {0: writer(0, 1)}, Schedule.scripted([0, 3]), 10)


def test_operation_tags_events():
    def op():
        yield Invoke("inc", txn="t1")
        yield Access(0, PrimitiveOp.fetch_add(1))
        yield Access(0, PrimitiveOp.fetch_add(1))
        yield Respond("done")
        yield Mark("after")

    mem = fresh_memory(1)
    sim = Simulation(mem, {0: op()})
    sim.step(0)
    # invocation marker and the first primitive share the entry
    assert [type(r).__name__ for r in mem.records] == ["Marker", "RmwEvent"]
    sim.step(0)
    assert sim.completed(0)
    events = [r for r in mem.records if r.__class__.__name__ == "RmwEvent"]
    assert {e.txn for e in events} == {"t1"}
    assert {e.top for e in events} == {0}
    assert sim.responses == {"t1": ["done"]}
    assert mem.records[-1].kind is MarkerKind.MARK


def test_response_without_access_still_costs_an_entry():
    def op():
        yield Invoke("noop", txn="t")
        yield Respond("r")
        yield Access(0, PrimitiveOp.read())

    mem = fresh_memory(1)
    sim = Simulation(mem, {0: op()})
    sim.step(0)
    assert [r.kind for r in mem.records] == [MarkerKind.INVOKE, MarkerKind.RESPOND]
    sim.step(0)
    assert len(mem.records) == 3


def test_respond_without_operation():
    def bad():
        yield Respond(None)

    sim = Simulation(fresh_memory(1), {0: bad()})
    with pytest.raises(ScheduleError):
        sim.step(0)


def test_run_until_budget():
    sim = Simulation(fresh_memory(1), {0: spinner(0)})
    with pytest.raises(ScheduleError):
        sim.run_until(0, lambda: False, 5)


def test_replay_matches_and_detects_tampering():
    machines = {0: writer(0, 1, 2), 1: writer(0, 3)}
    execution = run_schedule(fresh_memory(), machines, Schedule.round_robin(), 100)
    assert replay_execution(execution) == []

    first = execution.events[0]
    tampered = list(execution.records)
    tampered[first.seq] = replace(first, after=99)
    assert replay_execution(replace(execution, records=tuple(tampered)))


def test_log_round_trip_replays():
    machines = {0: writer(0, 1, 2), 1: writer(1, 3)}
    execution = run_schedule(fresh_memory(), machines, Schedule.round_robin(), 100)
    loaded = Execution.from_json_lines(execution.to_json_lines())
    assert loaded.dumps() == execution.dumps()
    assert replay_execution(loaded) == []
