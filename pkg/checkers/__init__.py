"""
Property checkers over histories and executions

Serialization search (opacity, strict serializability) with an independent
oracle, progress properties, weak DAP, invisible reads and liveness witnesses.
"""

from .dap import DapViolation, check_weak_dap, concurrent_contention, conflict_graph, disjoint_access
from .errors import BoundExceededError
from .invisible_reads import InvisibleReadsMode, InvisibleReadViolation, check_invisible_reads
from .liveness import LivenessProbe, WorkloadVerdict, check_icf_liveness, check_sequential_progress
from .oracle import brute_force_serializable, brute_force_strict_serializability
from .progress import (
    ConflictPartition,
    check_progressiveness,
    check_strong_progressiveness,
    conflict_components,
)
from .serialization import (
    CheckMode,
    SerializationWitness,
    check_opacity,
    check_strict_serializability,
    find_serialization,
    validate_witness,
)

__all__ = [
    'BoundExceededError',
    'CheckMode',
    'ConflictPartition',
    'DapViolation',
    'InvisibleReadViolation',
    'InvisibleReadsMode',
    'LivenessProbe',
    'SerializationWitness',
    'WorkloadVerdict',
    'brute_force_serializable',
    'brute_force_strict_serializability',
    'check_icf_liveness',
    'check_invisible_reads',
    'check_opacity',
    'check_progressiveness',
    'check_sequential_progress',
    'check_strict_serializability',
    'check_strong_progressiveness',
    'check_weak_dap',
    'concurrent_contention',
    'conflict_components',
    'conflict_graph',
    'disjoint_access',
    'find_serialization',
    'validate_witness',
]
