"""Seeded random transaction workloads and the builders that install them."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from sim import ALL_MODELS, Memory, MemoryModel, StepMachine

from .base import TransactionalMemory
from .driver import TOpSpec, TxnIdAllocator, TxnScript, process_machine
from .types import TObjectId, tobject_key

Workload = dict[int, list[TxnScript]]
Builder = Callable[[], "tuple[Memory, dict[int, StepMachine]]"]


def tobject_names(count: int) -> list[TObjectId]:
    return [f"X{i}" for i in range(1, count + 1)]


def random_workload(
    seed: int,
    processes: int = 2,
    txns_per_process: int = 1,
    objects: int = 2,
    max_ops: int = 3,
    write_ratio: float = 0.5,
    single_object: bool = False,
) -> Workload:
    """Random scripts; every write stores a value unique within the workload"""
    rng = np.random.default_rng(seed)
    names = tobject_names(objects)
    next_value = 1
    workload: Workload = {}
    for process in range(processes):
        scripts = []
        for _ in range(txns_per_process):
            pinned = names[int(rng.integers(len(names)))] if single_object else None
            ops = []
            for _ in range(int(rng.integers(1, max_ops + 1))):
                x = pinned or names[int(rng.integers(len(names)))]
                if rng.random() < write_ratio:
                    ops.append(TOpSpec.write(x, next_value))
                    next_value += 1
                else:
                    ops.append(TOpSpec.read(x))
            scripts.append(tuple(ops))
        workload[process] = scripts
    return workload


def workload_tobjects(workload: Mapping[int, Iterable[Sequence[TOpSpec]]], initial: Any = 0) -> dict[TObjectId, Any]:
    names = {op.obj for scripts in workload.values() for script in scripts for op in script if op.obj is not None}
    return {x: initial for x in sorted(names, key=tobject_key)}


def workload_builder(
    tm_cls: type[TransactionalMemory],
    workload: Workload,
    tobjects: Mapping[TObjectId, Any] | None = None,
    models: Iterable[MemoryModel | str] = ALL_MODELS,
    retries: int = 0,
) -> Builder:
    """A zero-argument builder producing fresh memory and machines per call"""
    cells = dict(tobjects) if tobjects is not None else workload_tobjects(workload)
    models = tuple(models)

    def build():
        memory = Memory(models)
        tm = tm_cls(memory, cells)
        ids = TxnIdAllocator()
        machines = {p: process_machine(tm, p, scripts, ids, retries) for p, scripts in sorted(workload.items())}
        return memory, machines

    return build
