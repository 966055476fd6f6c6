"""
Lower-bound harness

Builds the adversarial execution families against a TM and measures the
validation steps and base-object footprint of the reader's t-reads.
"""

from .costs import CostReport, CostRow, measure_final_read_space, measure_quadratic, op_cost
from .errors import HarnessDeviation
from .families import (
    NV_OFFSET,
    T_EARLY,
    T_LATE,
    T_READER,
    FamilyRun,
    Variant,
    build_final_read_execution,
    build_fresh_read_execution,
    build_stale_snapshot_execution,
    new_value,
    tobject,
)

__all__ = [
    'CostReport',
    'CostRow',
    'FamilyRun',
    'HarnessDeviation',
    'NV_OFFSET',
    'T_EARLY',
    'T_LATE',
    'T_READER',
    'Variant',
    'build_final_read_execution',
    'build_fresh_read_execution',
    'build_stale_snapshot_execution',
    'measure_final_read_space',
    'measure_quadratic',
    'new_value',
    'op_cost',
    'tobject',
]
