"""
Transactional memory layer

The t-operation interface, histories derived from executions, and the step
machine TMs that run on the simulator.
"""

from .base import TransactionalMemory, TxnState
from .driver import TOpSpec, TxnIdAllocator, TxnResult, TxnScript, process_machine, transaction
from .errors import HistoryError, MalformedHistoryError, TMUsageError, UnknownTransactionError
from .history import (
    History,
    Quiescence,
    TOp,
    TxnView,
    concurrent,
    conflicts,
    derive_history,
    quiescence,
    real_time_precedes,
    step_contention_free,
)
from .ref_tm import LazyTM, LockWord, RefTM
from .sp1_tm import SP1TM
from .types import ABORTED, COMMITTED, OK, Outcome, TObjectId, TOpKind, TxnId, TxnStatus, tobject_key
from .workloads import random_workload, workload_builder, workload_tobjects

TM_REGISTRY: dict[str, type[TransactionalMemory]] = {
    RefTM.name: RefTM,
    SP1TM.name: SP1TM,
    LazyTM.name: LazyTM,
}


def get_tm(name: str) -> type[TransactionalMemory]:
    try:
        return TM_REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown TM {name!r}; choose from {sorted(TM_REGISTRY)}") from None


__all__ = [
    'ABORTED',
    'COMMITTED',
    'History',
    'HistoryError',
    'LazyTM',
    'LockWord',
    'MalformedHistoryError',
    'OK',
    'Outcome',
    'Quiescence',
    'RefTM',
    'SP1TM',
    'TMUsageError',
    'TM_REGISTRY',
    'TObjectId',
    'TOp',
    'TOpKind',
    'TOpSpec',
    'TransactionalMemory',
    'TxnId',
    'TxnIdAllocator',
    'TxnResult',
    'TxnScript',
    'TxnState',
    'TxnStatus',
    'TxnView',
    'UnknownTransactionError',
    'concurrent',
    'conflicts',
    'derive_history',
    'get_tm',
    'process_machine',
    'quiescence',
    'random_workload',
    'real_time_precedes',
    'step_contention_free',
    'tobject_key',
    'transaction',
    'workload_builder',
    'workload_tobjects',
]
