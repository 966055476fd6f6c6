"""
Deterministic shared-memory simulation

Base objects driven by RMW primitives, processes written as step machines,
an explicit scheduler and RMR accounting under three memory models.
"""

from .errors import DuplicateObjectError, MissingOwnershipError, ScheduleError, SimulationError, UnknownObjectError
from .execution import Execution, replay_execution
from .explore import ExplorationStats, explore_schedules
from .memory import (
    BaseObjectId,
    Marker,
    MarkerKind,
    Memory,
    RmwEvent,
    apply_primitive,
    create_memory,
    rmr_report,
)
from .primitives import PrimitiveKind, PrimitiveOp, is_conditional, is_trivial
from .rmr import ALL_MODELS, NO_OWNER, CacheState, MemoryModel, RmrFilter
from .schedule_file import format_schedule, load_schedule, parse_schedule, save_schedule
from .scheduler import Access, Invoke, Mark, Respond, Schedule, ScheduleMode, Simulation, StepMachine, run_schedule
from .values import BOTTOM, LOCKED, UNLOCKED, Atom

__all__ = [
    'ALL_MODELS',
    'Access',
    'Atom',
    'BOTTOM',
    'BaseObjectId',
    'CacheState',
    'DuplicateObjectError',
    'Execution',
    'ExplorationStats',
    'Invoke',
    'LOCKED',
    'Mark',
    'Marker',
    'MarkerKind',
    'Memory',
    'MemoryModel',
    'MissingOwnershipError',
    'NO_OWNER',
    'PrimitiveKind',
    'PrimitiveOp',
    'Respond',
    'RmrFilter',
    'RmwEvent',
    'Schedule',
    'ScheduleError',
    'ScheduleMode',
    'Simulation',
    'SimulationError',
    'StepMachine',
    'UNLOCKED',
    'UnknownObjectError',
    'apply_primitive',
    'create_memory',
    'explore_schedules',
    'format_schedule',
    'is_conditional',
    'is_trivial',
    'load_schedule',
    'parse_schedule',
    'replay_execution',
    'rmr_report',
    'run_schedule',
    'save_schedule',
]
