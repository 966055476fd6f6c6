from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any

TObjectId = str


@dataclass(frozen=True, order=True)
class TxnId:
    k: int
    process: int

    def __str__(self) -> str:
        return f"T{self.k}"


class Outcome(str, Enum):
    OK = "ok"
    ABORTED = "A"
    COMMITTED = "C"

    def __str__(self) -> str:
        return self.value


OK = Outcome.OK
ABORTED = Outcome.ABORTED
COMMITTED = Outcome.COMMITTED


class TOpKind(str, Enum):
    READ = "read"
    WRITE = "write"
    TRYC = "tryC"


class TxnStatus(str, Enum):
    COMMITTED = "committed"
    ABORTED = "aborted"
    T_INCOMPLETE = "t-incomplete"


def normalize_outcome(value: Any) -> Any:
    """Map outcome strings read back from JSON onto Outcome members"""
    if isinstance(value, str) and not isinstance(value, Outcome):
        try:
            return Outcome(value)
        except ValueError:
            return value
    return value


_NUMBERED = re.compile(r"^(.*?)(\d+)$")


def tobject_key(x: TObjectId) -> tuple:
    """Natural order for t-object ids: X2 before X10"""
    match = _NUMBERED.match(x)
    if match:
        return (match.group(1), int(match.group(2)))
    return (x, -1)
