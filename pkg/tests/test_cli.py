import json

import pytest

from histories import history_entries
from lab_cli import EXIT_OK, EXIT_REFUSED, EXIT_USAGE, EXIT_VIOLATION, main
from tools.config_tools import ENV_KEYS

FORBIDDEN = [
    ("R", 1, "x", 0),
    ("W", 2, "x", 1001),
    ("C", 2),
    ("W", 3, "y", 1002),
    ("C", 3),
    ("R", 1, "y", 1002),
]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ENV_KEYS.values():
        monkeypatch.delenv(name, raising=False)


def write_history(path, steps):
    path.write_text(json.dumps(history_entries(steps)), encoding="utf-8")
    return str(path)


def test_empty_trace_passes(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("", encoding="utf-8")
    assert main(["check", "--property", "opacity", "--in", str(empty)]) == EXIT_OK
    assert '"verdict": "pass"' in capsys.readouterr().out


def test_forbidden_trace_violates_opacity(tmp_path):
    trace = write_history(tmp_path / "h.json", FORBIDDEN)
    assert main(["check", "--property", "opacity", "--in", trace]) == EXIT_VIOLATION
    assert main(["check", "--property", "prog", "--in", trace]) == EXIT_OK


def test_bound_refusal(tmp_path):
    steps = []
    for k in range(1, 11):
        steps += [("R", k, "x", 0), ("C", k)]
    trace = write_history(tmp_path / "h.json", steps)
    assert main(["check", "--property", "strict-ser", "--in", trace, "--bound", "8"]) == EXIT_REFUSED
    assert main(["check", "--property", "strict-ser", "--in", trace, "--bound", "10"]) == EXIT_OK


def test_usage_errors(tmp_path, capsys):
    trace = write_history(tmp_path / "h.json", FORBIDDEN)
    assert main(["simulate", "--bogus"]) == EXIT_USAGE
    assert main(["teleport"]) == EXIT_USAGE
    assert main(["check", "--in", trace]) == EXIT_USAGE
    assert main(["check", "--property", "weak-dap", "--in", trace]) == EXIT_USAGE
    assert main(["check", "--property", "opacity", "--in", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert main(["check", "--config", str(tmp_path / "missing.env")]) == EXIT_USAGE
    capsys.readouterr()


def test_malformed_history_is_a_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"txn": 1, "kind": "read"}]), encoding="utf-8")
    assert main(["check", "--property", "opacity", "--in", str(path)]) == EXIT_USAGE


def test_config_file_supplies_flags(tmp_path):
    trace = write_history(tmp_path / "h.json", FORBIDDEN)
    config = tmp_path / "lab.env"
    config.write_text(f"property=strict-ser\ninput={trace}\n", encoding="utf-8")
    assert main(["check", "--config", str(config)]) == EXIT_OK


def test_quadratic(capsys):
    assert main(["lowerbound", "quadratic", "--m", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "i,steps,distinctObjects,foreignObjects,cumulativeSteps,analyticBound,pass" in out
    assert "# total_steps=18" in out


def test_quadratic_negative_control():
    assert main(["lowerbound", "quadratic", "--tm", "lazy", "--m", "4"]) == EXIT_VIOLATION


def test_space_report_file(tmp_path, capsys):
    out = tmp_path / "space.json"
    assert main(["lowerbound", "space", "--m", "4", "--format", "json", "--out", str(out)]) == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert len(document["rows"]) == 3
    assert document["provenance"]["kind"] == "space"
    assert document["provenance"]["summary.passed"] is True


def test_mutex_exhaustive(capsys):
    assert main(["mutex", "--n", "2", "--exhaustive", "--depth", "30"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "# violations=0" in out
    assert "# completedRuns=" in out
    assert "# completedRuns=0\n" not in out


def test_mutex_run_writes_trace(tmp_path, capsys):
    trace = tmp_path / "mutex.jsonl"
    assert main(["mutex", "--n", "3", "--passes", "2", "--table", "passages", "--trace-out", str(trace)]) == EXIT_OK
    assert trace.read_text(encoding="utf-8").startswith('{"record": "meta"')
    assert "process,passage" in capsys.readouterr().out


def test_mutex_truncated_run_is_refused():
    assert main(["mutex", "--n", "3", "--passes", "5", "--max-steps", "20"]) == EXIT_REFUSED


def test_simulate_writes_logs(tmp_path, capsys):
    log = tmp_path / "run.jsonl"
    history = tmp_path / "history.json"
    code = main(["simulate", "--tm", "ref", "--seed", "1", "--sweep", "2", "--out", str(log), "--history-out", str(history)])
    assert code == EXIT_OK
    assert log.exists() and history.exists()
    out = capsys.readouterr().out
    assert "seed,records,transactions,truncated,replay,opacity" in out
    assert "# verdict=pass" in out
    assert main(["check", "--property", "weak-dap", "--in", str(log)]) == EXIT_OK
