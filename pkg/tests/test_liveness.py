from checkers import check_icf_liveness, check_sequential_progress
from sim import Schedule
from tm import SP1TM, LazyTM, RefTM, TOpSpec, workload_builder

from conftest import AlwaysAbortTM, SpinningReadTM

SCRIPTS = [(TOpSpec.read("X1"), TOpSpec.write("X1", 5)), (TOpSpec.read("X1"),)]


def test_solo_transactions_commit():
    for tm_cls in (RefTM, LazyTM, SP1TM):
        [verdict] = check_sequential_progress(tm_cls, [SCRIPTS])
        assert verdict.passed, tm_cls.name
        assert verdict.outcomes == ["C", "C"]


def test_always_abort_fails_sequential_progress():
    [verdict] = check_sequential_progress(AlwaysAbortTM, [SCRIPTS])
    assert not verdict.passed
    assert verdict.reason == "a solo transaction aborted"


def test_spinning_read_exhausts_budget():
    [verdict] = check_sequential_progress(SpinningReadTM, [SCRIPTS], step_budget=50)
    assert not verdict.passed
    assert verdict.steps == 50
    assert verdict.to_json()["workload"] == 0


def test_ref_probes_all_respond():
    workload = {0: [(TOpSpec.read("X1"), TOpSpec.write("X2", 1))], 1: [(TOpSpec.read("X2"), TOpSpec.write("X1", 2))]}
    probes = check_icf_liveness(workload_builder(RefTM, workload), Schedule.round_robin(), max_steps=1000)
    assert probes
    assert all(p.responded for p in probes)


def test_spinning_read_probe_fails():
    build = workload_builder(SpinningReadTM, {0: [(TOpSpec.read("X1"),)]})
    probes = check_icf_liveness(build, Schedule.round_robin(), max_steps=50, step_budget=20)
    assert probes
    failed = [p for p in probes if not p.responded]
    assert failed[0].prefix == 0
    assert failed[0].steps == 20
