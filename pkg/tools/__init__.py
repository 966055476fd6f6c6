"""
Lab Tools

Configuration, trace IO, pandas report emission and the lab operations
behind the command line and the MCP server.
"""

from .config_tools import ExperimentConfig, load_config_file, resolve_config
from .lab_tools import (
    PROPERTIES,
    CheckResult,
    LabTools,
    SweepReport,
    Verdict,
    check_trace,
    list_tms,
    measure_lower_bound,
    run_mutex,
    simulate,
)
from .report_tools import ReportAnalyzer, emit_report, render_report
from .trace_io import load_trace, parse_trace, read_execution_log, write_execution_log, write_history

__all__ = [
    'CheckResult',
    'ExperimentConfig',
    'LabTools',
    'PROPERTIES',
    'ReportAnalyzer',
    'SweepReport',
    'Verdict',
    'check_trace',
    'emit_report',
    'list_tms',
    'load_config_file',
    'load_trace',
    'measure_lower_bound',
    'parse_trace',
    'read_execution_log',
    'render_report',
    'resolve_config',
    'run_mutex',
    'simulate',
    'write_execution_log',
    'write_history',
]
