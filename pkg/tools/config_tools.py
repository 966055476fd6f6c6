"""
Experiment configuration.

Precedence: explicit flag > config file > TMLAB_* environment > default.
Config files use the same key=value format as .env files and are read with
python-dotenv.
"""

from __future__ import annotations

import builtins
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from dotenv import dotenv_values

ENV_KEYS = {
    "seed": "TMLAB_SEED",
    "max_steps": "TMLAB_MAX_STEPS",
    "bound": "TMLAB_CHECK_BOUND",
    "log_level": "TMLAB_LOG_LEVEL",
}

_TRUE = {"1", "true", "yes", "on"}


@dataclass
class ExperimentConfig:
    command: str = ""
    kind: str | None = None
    tm: str = "ref"
    m: int = 4
    n: int = 2
    passes: int = 1
    txns: int = 2
    objects: int = 2
    seed: int = 0
    sweep: int = 1
    mode: str | None = None
    model: str = "all"
    property: str | None = None
    bound: int = 8
    max_steps: int = 100_000
    depth: int = 48
    exhaustive: bool = False
    format: str = "csv"
    input: str | None = None
    output: str | None = None
    schedule: str | None = None
    history_out: str | None = None
    trace_out: str | None = None
    table: str = "rmr"
    log_level: str = "WARNING"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_lines(self) -> list[str]:
        """key=value lines, sorted by key; unset optional fields are left out"""
        return [f"{k}={v}" for k, v in sorted(self.to_dict().items()) if v is not None]

    def dump(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_lines()) + "\n", encoding="utf-8")

    def provenance(self) -> dict[str, Any]:
        return {k: v for k, v in sorted(self.to_dict().items()) if v is not None}

    @builtins.property
    def models(self) -> tuple[str, ...]:
        if self.model == "all":
            return ("wt", "wb", "dsm")
        return tuple(part.strip() for part in self.model.split(",") if part.strip())

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> ExperimentConfig:
        known = {f.name: f for f in fields(cls)}
        defaults = cls()
        converted = {}
        for key, raw in values.items():
            name = key.strip().lower().replace("-", "_")
            if name not in known:
                raise ValueError(f"unknown config key {key!r}")
            if raw is None:
                continue
            converted[name] = _convert(raw, getattr(defaults, name))
        return cls(**converted)


def _convert(raw: Any, default: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    if isinstance(default, bool):
        return raw.strip().lower() in _TRUE
    if isinstance(default, int):
        return int(raw)
    return raw


def load_config_file(path: str | Path) -> dict[str, str | None]:
    if not Path(path).is_file():
        raise FileNotFoundError(f"config file {path} not found")
    return dict(dotenv_values(path))


def resolve_config(
    command: str,
    flags: Mapping[str, Any],
    config_path: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> ExperimentConfig:
    environ = os.environ if environ is None else environ
    merged: dict[str, Any] = {}
    for key, env_name in ENV_KEYS.items():
        if environ.get(env_name):
            merged[key] = environ[env_name]
    if config_path:
        merged.update({k: v for k, v in load_config_file(config_path).items() if v is not None})
    merged.update({k: v for k, v in flags.items() if v is not None})
    merged["command"] = command
    return ExperimentConfig.from_mapping(merged)
