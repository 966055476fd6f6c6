"""
Mutual exclusion built on a single-object TM

The Entry/Exit step machines, the mutual-exclusion scan, per-passage RMR
accounting and exhaustive small-n exploration.
"""

from .algorithm import FACES, Face, FuncResult, MutexProcess, MutexShared
from .experiment import (
    DEFAULT_EXPLORE_DEPTH,
    MutexExploration,
    MutexReport,
    PassageCost,
    build_mutex,
    check_mutual_exclusion,
    completed_passages,
    explore_mutex,
    passage_costs,
    run_mutex_experiment,
)

__all__ = [
    'DEFAULT_EXPLORE_DEPTH',
    'FACES',
    'Face',
    'FuncResult',
    'MutexExploration',
    'MutexProcess',
    'MutexReport',
    'MutexShared',
    'PassageCost',
    'build_mutex',
    'check_mutual_exclusion',
    'completed_passages',
    'explore_mutex',
    'passage_costs',
    'run_mutex_experiment',
]
