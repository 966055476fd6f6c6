import json

import pandas as pd
import pytest

from harness import measure_quadratic
from histories import build_history
from sim import Execution, Schedule, run_schedule
from tm import History, LazyTM, MalformedHistoryError, RefTM, TOpSpec, derive_history, workload_builder
from tools.report_tools import ReportAnalyzer, emit_report, render_report
from tools.trace_io import load_trace, parse_trace, write_execution_log, write_history


def test_empty_frame_keeps_its_header():
    assert render_report(pd.DataFrame(columns=["i", "steps"])) == "i,steps\n"


def test_csv_provenance_lines():
    frame = pd.DataFrame([{"i": 1, "steps": 3}])
    text = render_report(frame, "csv", {"tm": "ref", "m": 2})
    assert text.splitlines() == ["# m=2", "# tm=ref", "i,steps", "1,3"]


def test_json_document():
    frame = pd.DataFrame([{"i": 1, "steps": 3}])
    document = json.loads(render_report(frame, "json", {"tm": "ref"}))
    assert document == {"provenance": {"tm": "ref"}, "columns": ["i", "steps"], "rows": [{"i": 1, "steps": 3}]}


def test_unknown_format():
    with pytest.raises(ValueError):
        render_report(pd.DataFrame(), "xml")


def test_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        emit_report(pd.DataFrame(columns=["i"]), "csv", tmp_path / "missing" / "r.csv")


def test_analyzer_reads_back_a_report(tmp_report):
    report = measure_quadratic(LazyTM, 4)
    emit_report(report.to_frame(), "csv", tmp_report, {"tm": "lazy"})
    analyzer = ReportAnalyzer(tmp_report)
    assert analyzer.get_info()["shape"] == [4, 7]
    failing = analyzer.failing_rows()
    assert failing["failed_count"] == 3
    assert [row["i"] for row in failing["data"]] == [2, 3, 4]
    assert "steps" in analyzer.get_summary_stats()
    assert "error" in analyzer.failing_rows("nope")


def test_analyzer_rejects_missing_file(tmp_path):
    with pytest.raises(ValueError, match="Error loading report"):
        ReportAnalyzer(tmp_path / "none.csv")


def test_traces_load_back(tmp_path):
    workload = {0: [(TOpSpec.write("X1", 4),)], 1: [(TOpSpec.read("X1"),)]}
    memory, machines = workload_builder(RefTM, workload)()
    execution = run_schedule(memory, machines, Schedule.round_robin(), 1000)

    log = tmp_path / "run.jsonl"
    write_execution_log(execution, log)
    loaded = load_trace(log)
    assert isinstance(loaded, Execution)
    assert len(loaded.records) == len(execution.records)

    path = tmp_path / "history.json"
    write_history(derive_history(execution), path)
    history = load_trace(path)
    assert isinstance(history, History)
    assert len(history.txns()) == 2


def test_parse_trace_shapes():
    assert parse_trace("  ") == Execution(records=())
    plain = json.dumps(build_history([("R", 1, "x", 0), ("C", 1)]).to_json())
    assert len(parse_trace(plain).txns()) == 1
    with pytest.raises(MalformedHistoryError):
        parse_trace('{"something": 1}')
