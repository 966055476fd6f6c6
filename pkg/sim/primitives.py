"""
RMW primitives as ⟨g, h⟩ pairs.

`PrimitiveOp.apply` is the pair itself: given the object state (and, for SC,
whether the caller holds a valid link) it returns the new state and the
response. Classification into trivial / nontrivial / conditional is a total
function of the primitive kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class PrimitiveKind(str, Enum):
    READ = "READ"
    WRITE = "WRITE"
    CAS = "CAS"
    LL = "LL"
    SC = "SC"
    FETCH_ADD = "FETCH_ADD"


TRIVIAL_KINDS = frozenset({PrimitiveKind.READ, PrimitiveKind.LL})
CONDITIONAL_KINDS = frozenset({PrimitiveKind.CAS, PrimitiveKind.SC})

_ARITY = {
    PrimitiveKind.READ: 0,
    PrimitiveKind.WRITE: 1,
    PrimitiveKind.CAS: 2,
    PrimitiveKind.LL: 0,
    PrimitiveKind.SC: 1,
    PrimitiveKind.FETCH_ADD: 1,
}


def is_trivial(kind: PrimitiveKind) -> bool:
    return kind in TRIVIAL_KINDS


def is_conditional(kind: PrimitiveKind) -> bool:
    return kind in CONDITIONAL_KINDS


@dataclass(frozen=True)
class PrimitiveOp:
    kind: PrimitiveKind
    operands: tuple = ()

    def __post_init__(self):
        if len(self.operands) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} takes {_ARITY[self.kind]} operand(s), got {len(self.operands)}")

    @classmethod
    def read(cls) -> PrimitiveOp:
        return cls(PrimitiveKind.READ)

    @classmethod
    def write(cls, value: Any) -> PrimitiveOp:
        return cls(PrimitiveKind.WRITE, (value,))

    @classmethod
    def cas(cls, expected: Any, new: Any) -> PrimitiveOp:
        return cls(PrimitiveKind.CAS, (expected, new))

    @classmethod
    def ll(cls) -> PrimitiveOp:
        return cls(PrimitiveKind.LL)

    @classmethod
    def sc(cls, value: Any) -> PrimitiveOp:
        return cls(PrimitiveKind.SC, (value,))

    @classmethod
    def fetch_add(cls, delta: int) -> PrimitiveOp:
        return cls(PrimitiveKind.FETCH_ADD, (delta,))

    @property
    def trivial(self) -> bool:
        return is_trivial(self.kind)

    @property
    def nontrivial(self) -> bool:
        return not is_trivial(self.kind)

    @property
    def conditional(self) -> bool:
        return is_conditional(self.kind)

    def apply(self, state: Any, linked: bool = False) -> tuple[Any, Any]:
        """Return (g(state, operands), h(state, operands))"""
        kind = self.kind
        if kind in TRIVIAL_KINDS:
            return state, state
        if kind is PrimitiveKind.WRITE:
            return self.operands[0], None
        if kind is PrimitiveKind.CAS:
            expected, new = self.operands
            if state == expected:
                return new, True
            return state, False
        if kind is PrimitiveKind.SC:
            if linked:
                return self.operands[0], True
            return state, False
        # FETCH_ADD
        return state + self.operands[0], state

    def modifies(self, response: Any) -> bool:
        """Whether an application with this response counts as a write for LL links"""
        if self.kind in CONDITIONAL_KINDS:
            return response is True
        return self.nontrivial

    def __str__(self) -> str:
        args = ", ".join(repr(v) for v in self.operands)
        return f"{self.kind.value}({args})"
