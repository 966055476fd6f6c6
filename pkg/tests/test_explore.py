from math import comb

from sim import Access, Memory, PrimitiveOp, explore_schedules


def incrementer(obj, times):
    for _ in range(times):
        value = yield Access(obj, PrimitiveOp.read())
        yield Access(obj, PrimitiveOp.write(value + 1))


def build(times=1):
    def make():
        mem = Memory(models=())
        mem.add_object(0, 0)
        return mem, {0: incrementer(0, times), 1: incrementer(0, times)}

    return make


def test_every_interleaving_visited_once():
    seen = []
    stats = explore_schedules(build(1), 100, lambda e: seen.append(e.decisions))
    # two processes with two steps each
    assert stats.runs == comb(4, 2)
    assert len(set(seen)) == len(seen)
    assert stats.truncated_runs == 0


def test_lost_update_is_found():
    finals = set()

    def visit(execution):
        finals.add(execution.events[-1].after)

    explore_schedules(build(1), 100, visit)
    assert finals == {1, 2}


def test_visit_can_stop_early():
    stats = explore_schedules(build(1), 100, lambda e: e.events[-1].after == 1)
    assert stats.stopped_early
    assert stats.runs < comb(4, 2)


def test_depth_bound_truncates():
    stats = explore_schedules(build(2), 3, lambda e: None)
    assert stats.runs == 2**3
    assert stats.truncated_runs == stats.runs


def test_max_runs():
    stats = explore_schedules(build(2), 100, lambda e: None, max_runs=5)
    assert stats.runs == 5
    assert stats.stopped_early


def independent_writers():
    def writer(obj):
        yield Access(obj, PrimitiveOp.write(1))
        yield Access(obj, PrimitiveOp.write(2))

    mem = Memory(models=())
    mem.add_object(0, 0)
    mem.add_object(1, 0)
    return mem, {0: writer(0), 1: writer(1)}


def test_pruning_merges_commuting_steps():
    plain = explore_schedules(independent_writers, 100, lambda e: None)
    pruned = explore_schedules(independent_writers, 100, lambda e: None, prune=True)
    assert plain.runs == comb(4, 2)
    assert plain.pruned_runs == 0
    assert pruned.runs == 5
    assert pruned.pruned_runs == 3
    assert pruned.states > 0


def test_pruning_still_finds_lost_update():
    finals = set()

    def visit(execution):
        finals.add(execution.events[-1].after)

    stats = explore_schedules(build(1), 100, visit, prune=True)
    assert finals == {1, 2}
    assert stats.truncated_runs == 0
