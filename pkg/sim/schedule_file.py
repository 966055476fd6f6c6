"""Line-oriented schedule files: `# mode:` / `# seed:` headers, then one process per line."""

from __future__ import annotations

from pathlib import Path

from .errors import ScheduleError
from .scheduler import Schedule, ScheduleMode


def parse_schedule(text: str) -> Schedule:
    mode = ScheduleMode.SCRIPTED
    seed = 0
    steps: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            key, value = key.strip().lower(), value.strip()
            try:
                if key == "mode":
                    mode = ScheduleMode(value.lower())
                elif key == "seed":
                    seed = int(value)
            except ValueError:
                raise ScheduleError(f"line {number}: bad {key} header {value!r}") from None
            continue
        token = line[1:] if line[:1] in ("p", "P") else line
        if not token.isdigit():
            raise ScheduleError(f"line {number}: expected a process id, got {line!r}")
        steps.append(int(token))

    if mode is ScheduleMode.SCRIPTED:
        return Schedule.scripted(steps)
    return Schedule(mode, tuple(steps), seed)


def format_schedule(schedule: Schedule) -> str:
    lines = [f"# mode: {schedule.mode.value}", f"# seed: {schedule.seed}"]
    lines.extend(str(pid) for pid in schedule.steps)
    return "\n".join(lines) + "\n"


def load_schedule(path: str | Path) -> Schedule:
    return parse_schedule(Path(path).read_text(encoding="utf-8"))


def save_schedule(schedule: Schedule, path: str | Path) -> None:
    Path(path).write_text(format_schedule(schedule), encoding="utf-8")
