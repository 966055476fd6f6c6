#!/usr/bin/env python3
"""
Command line for the TM lab

    simulate     seeded random workloads on a TM, checked for its properties
    check        one property checker on a history or execution log
    lowerbound   read-validation step and space costs (quadratic | space)
    mutex        the TM-based mutual exclusion algorithm and its RMR costs

Exit codes: 0 success, 1 property violation, 2 refusal (bound exceeded or
truncated run), 3 usage error.
"""

import argparse
import json
import logging
import sys

from dotenv import load_dotenv

from harness import HarnessDeviation
from sim import SimulationError
from tm import HistoryError, TM_REGISTRY
from tools.config_tools import ExperimentConfig, resolve_config
from tools.lab_tools import PROPERTIES, Verdict, check_trace, measure_lower_bound, run_mutex, simulate
from tools.report_tools import REPORT_FORMATS, emit_report
from tools.trace_io import load_trace, write_execution_log, write_history

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_REFUSED = 2
EXIT_USAGE = 3

VERDICT_EXIT = {Verdict.PASS: EXIT_OK, Verdict.VIOLATION: EXIT_VIOLATION, Verdict.REFUSED: EXIT_REFUSED}
SCHEDULE_MODES = ("roundrobin", "random")

logger = logging.getLogger("lab_cli")


class LabArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"\n{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file mirroring the flags")
    common.add_argument("--log-level", dest="log_level")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-steps", dest="max_steps", type=int)

    parser = LabArgumentParser(prog="lab_cli", description="TM simulation lab")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=LabArgumentParser)

    sim_cmd = commands.add_parser("simulate", parents=[common], help="run random workloads and check them")
    sim_cmd.add_argument("--tm", choices=sorted(TM_REGISTRY))
    sim_cmd.add_argument("--n", type=int, help="processes")
    sim_cmd.add_argument("--txns", type=int, help="transactions per process")
    sim_cmd.add_argument("--objects", type=int, help="t-objects")
    sim_cmd.add_argument("--sweep", type=int, help="number of consecutive seeds")
    sim_cmd.add_argument("--mode", choices=SCHEDULE_MODES)
    sim_cmd.add_argument("--schedule", help="schedule file, or a mode name")
    sim_cmd.add_argument("--bound", type=int)
    sim_cmd.add_argument("--model")
    sim_cmd.add_argument("--format", choices=REPORT_FORMATS)
    sim_cmd.add_argument("--out", dest="output", help="execution log (JSON lines)")
    sim_cmd.add_argument("--history-out", dest="history_out")

    check = commands.add_parser("check", parents=[common], help="check a trace for one property")
    check.add_argument("--property", choices=PROPERTIES)
    check.add_argument("--in", dest="input")
    check.add_argument("--bound", type=int)

    lower = commands.add_parser("lowerbound", parents=[common], help="measure read validation costs")
    lower.add_argument("kind", choices=("quadratic", "space"))
    lower.add_argument("--tm", choices=sorted(TM_REGISTRY))
    lower.add_argument("--m", type=int)
    lower.add_argument("--format", choices=REPORT_FORMATS)
    lower.add_argument("--out", dest="output")
    lower.add_argument("--trace-out", dest="trace_out", help="execution log of a deviating run")

    mutex = commands.add_parser("mutex", parents=[common], help="run the mutual exclusion experiment")
    mutex.add_argument("--n", type=int)
    mutex.add_argument("--passes", type=int)
    mutex.add_argument("--model")
    mutex.add_argument("--mode", choices=SCHEDULE_MODES)
    mutex.add_argument("--schedule", help="schedule file, or a mode name")
    mutex.add_argument("--exhaustive", action="store_true", default=None)
    mutex.add_argument("--depth", type=int)
    mutex.add_argument("--table", choices=("rmr", "passages"))
    mutex.add_argument("--format", choices=REPORT_FORMATS)
    mutex.add_argument("--out", dest="output")
    mutex.add_argument("--trace-out", dest="trace_out", help="execution log or counterexample")
    return parser


def _schedule_source(config: ExperimentConfig, default_mode: str) -> tuple[str, str | None]:
    """--schedule names either a mode or a schedule file"""
    if config.schedule in SCHEDULE_MODES:
        return config.schedule, None
    return config.mode or default_mode, config.schedule


def _print_report(frame, config: ExperimentConfig, summary: dict | None = None) -> None:
    provenance = config.provenance()
    if summary:
        provenance.update({f"summary.{k}": json.dumps(v, sort_keys=True) if isinstance(v, dict) else v for k, v in summary.items()})
    if config.output:
        emit_report(frame, config.format, config.output, provenance)
        print(f"# report written to {config.output}")
    else:
        print(emit_report(frame, config.format), end="")
    for key, value in (summary or {}).items():
        print(f"# {key}={value}")


def run_simulate(config: ExperimentConfig) -> int:
    mode, schedule_path = _schedule_source(config, "random")
    report = simulate(
        tm=config.tm,
        n=config.n,
        txns=config.txns,
        objects=config.objects,
        seed=config.seed,
        sweep=config.sweep,
        mode=mode,
        schedule_path=schedule_path,
        max_steps=config.max_steps,
        bound=config.bound,
        models=config.models,
    )
    run = report.representative
    if run is not None and config.output:
        write_execution_log(run.execution, config.output)
    if run is not None and config.history_out:
        write_history(run.history, config.history_out)
    print(emit_report(report.to_frame(), config.format), end="")
    for key, value in report.summary().items():
        print(f"# {key}={value}")
    return VERDICT_EXIT[report.verdict]


def run_check(config: ExperimentConfig) -> int:
    if not config.property or not config.input:
        print("❌ check needs --property and --in", file=sys.stderr)
        return EXIT_USAGE
    result = check_trace(load_trace(config.input), config.property, config.bound)
    print(json.dumps(result.to_json(), indent=2, default=str))
    return VERDICT_EXIT[result.verdict]


def run_lowerbound(config: ExperimentConfig) -> int:
    try:
        report = measure_lower_bound(config.kind, config.tm, config.m)
    except HarnessDeviation as e:
        print(f"❌ {e}", file=sys.stderr)
        if config.trace_out and e.execution is not None:
            write_execution_log(e.execution, config.trace_out)
        return EXIT_VIOLATION
    _print_report(report.to_frame(), config, report.summary())
    return EXIT_OK if report.passed else EXIT_VIOLATION


def run_mutex_command(config: ExperimentConfig) -> int:
    mode, schedule_path = _schedule_source(config, "roundrobin")
    result = run_mutex(
        n=config.n,
        passes=config.passes,
        mode=mode,
        seed=config.seed,
        schedule_path=schedule_path,
        max_steps=config.max_steps,
        models=config.models,
        exhaustive=config.exhaustive,
        depth=config.depth,
    )
    if config.exhaustive:
        for key, value in result.summary().items():
            print(f"# {key}={value}")
        if result.counterexamples and config.trace_out:
            write_execution_log(result.counterexamples[0], config.trace_out)
        return EXIT_OK if result.safe else EXIT_VIOLATION

    frame = result.rmr_frame() if config.table == "rmr" else result.to_frame()
    _print_report(frame, config, result.summary())
    if config.trace_out:
        write_execution_log(result.execution, config.trace_out)
    if not result.safe:
        return EXIT_VIOLATION
    if result.truncated or not result.all_completed:
        return EXIT_REFUSED
    return EXIT_OK


HANDLERS = {
    "simulate": run_simulate,
    "check": run_check,
    "lowerbound": run_lowerbound,
    "mutex": run_mutex_command,
}


def main(argv=None) -> int:
    """Main function"""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        config = resolve_config(args.command, flags, args.config)
    except (ValueError, FileNotFoundError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=config.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    for line in config.to_lines():
        print(f"# {line}")

    try:
        return HANDLERS[config.command](config)
    except (ValueError, FileNotFoundError, HistoryError, SimulationError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
