import pytest

from checkers import check_opacity
from harness import (
    HarnessDeviation,
    T_READER,
    Variant,
    build_final_read_execution,
    build_fresh_read_execution,
    build_stale_snapshot_execution,
    measure_final_read_space,
    measure_quadratic,
    new_value,
)
from tm import ABORTED, LazyTM, RefTM

from conftest import AlwaysAbortTM


@pytest.mark.parametrize("i", range(1, 9))
def test_fresh_read_returns_new_value(i):
    run = build_fresh_read_execution(RefTM, i)
    assert run.read_outcome == new_value(i)
    assert check_opacity(run.history) is not None


def test_fresh_read_without_writer():
    run = build_fresh_read_execution(RefTM, 3, with_writer=False)
    assert run.read_outcome == 0
    assert "late-writer" not in run.fragments


def test_stale_snapshot_ref_aborts():
    run = build_stale_snapshot_execution(RefTM, 3, 1, variant=Variant.ABORT)
    assert run.read_outcome is ABORTED
    assert not run.opacity_candidate
    assert run.opaque is None
    assert run.contention == []
    assert run.footprints["early-writer"] and run.footprints["late-writer"]


def test_stale_snapshot_lazy_returns_new_value():
    run = build_stale_snapshot_execution(LazyTM, 3, 1)
    assert run.read_outcome == new_value(3)
    assert check_opacity(run.history) is None
    assert run.opacity_candidate
    assert run.opaque is False


def test_variant_mismatch_is_a_deviation():
    with pytest.raises(HarnessDeviation) as info:
        build_stale_snapshot_execution(RefTM, 3, 1, variant="nv")
    assert info.value.fragment == "read"


def test_ell_out_of_range():
    with pytest.raises(ValueError):
        build_stale_snapshot_execution(RefTM, 3, 3)
    with pytest.raises(ValueError):
        build_final_read_execution(RefTM, 3, 0)


def test_writer_that_cannot_commit():
    with pytest.raises(HarnessDeviation) as info:
        build_fresh_read_execution(AlwaysAbortTM, 2)
    assert info.value.fragment == "late-writer"
    assert info.value.execution is not None


@pytest.mark.parametrize("m,total", [(2, 7), (4, 18), (6, 33), (8, 52)])
def test_quadratic_totals(m, total):
    report = measure_quadratic(RefTM, m)
    assert report.total_steps == total
    assert report.total_bound == m * (m - 1) // 2
    assert report.constant <= RefTM.TIGHTNESS_CONSTANT
    assert report.monotone
    assert report.passed
    for row in report.rows:
        assert row.steps == row.i + 2
        assert row.foreign_objects >= row.i - 1


def test_quadratic_frame():
    frame = measure_quadratic(RefTM, 4).to_frame()
    assert list(frame.columns) == ["i", "steps", "distinctObjects", "foreignObjects", "cumulativeSteps", "analyticBound", "pass"]
    assert frame["cumulativeSteps"].tolist() == [3, 7, 12, 18]
    assert frame["pass"].all()


def test_lazy_fails_quadratic():
    report = measure_quadratic(LazyTM, 4)
    assert [row.steps for row in report.rows] == [3, 3, 3, 3]
    assert not report.passed
    assert report.summary()["passed"] is False


@pytest.mark.parametrize("m", [2, 4, 8])
def test_space_ref(m):
    report = measure_final_read_space(RefTM, m)
    assert report.passed
    assert len(report.rows) == m - 1
    for row in report.rows:
        assert row.read_outcome is ABORTED
        assert row.steps == m + 2
        assert row.distinct_objects == m + 1


def test_space_lazy():
    report = measure_final_read_space(LazyTM, 4)
    assert report.passed
    for row in report.rows:
        assert row.read_outcome == new_value(4)
        assert row.tryc_outcome is ABORTED
        assert row.distinct_objects == 5


def test_final_read_events_belong_to_reader():
    run = build_final_read_execution(RefTM, 4, 2)
    assert all(e.txn == T_READER for e in run.events_of(T_READER, "final"))


def test_m_too_small():
    with pytest.raises(ValueError):
        measure_quadratic(RefTM, 1)
    with pytest.raises(ValueError):
        measure_final_read_space(RefTM, 1)
