"""
Value domain shared by base objects, t-objects and the mutex registers.

Values are small integers, symbolic atoms and tuples of those (process-face
pairs, version/lock words). Tuples travel through JSON as lists and are turned
back into tuples on load.
"""

from enum import Enum
from typing import Any


class Atom(str, Enum):
    BOTTOM = "⊥"
    LOCKED = "locked"
    UNLOCKED = "unlocked"

    def __str__(self) -> str:
        return self.value


BOTTOM = Atom.BOTTOM
LOCKED = Atom.LOCKED
UNLOCKED = Atom.UNLOCKED

_ATOMS = {atom.value: atom for atom in Atom}


def to_jsonable(value: Any) -> Any:
    """Convert a simulator value into plain JSON types"""
    if isinstance(value, Atom):
        return value.value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (tuple, list)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    return value


def from_jsonable(value: Any) -> Any:
    """Inverse of to_jsonable for values read back from a log"""
    if isinstance(value, list):
        return tuple(from_jsonable(v) for v in value)
    if isinstance(value, str) and value in _ATOMS:
        return _ATOMS[value]
    return value
