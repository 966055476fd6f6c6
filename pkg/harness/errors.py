from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from sim import Execution


class HarnessDeviation(Exception):
    """The TM under test left the execution family at a named fragment."""

    def __init__(self, fragment: str, message: str, execution: Execution | None = None):
        super().__init__(f"{fragment}: {message}")
        self.fragment = fragment
        self.execution = execution
