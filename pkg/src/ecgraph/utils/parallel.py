"""Deterministic chunked work over a process pool.

Results always come back in task order, so a merge over them does not depend
on how many workers ran.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from ..config import get_settings

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)

_SHARED: Any = None


def resolve_workers(threads: Optional[int] = None) -> int:
    """`threads` flag, else ECGRAPH_THREADS, else all cores."""
    if threads is None:
        threads = get_settings().threads
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return int(threads)


def _install_shared(shared: Any) -> None:
    global _SHARED
    _SHARED = shared


def _call(fn: Callable[[Any, T], R], task: T) -> R:
    return fn(_SHARED, task)


def run_chunks(
    fn: Callable[[Any, T], R],
    tasks: Sequence[T],
    *,
    shared: Any = None,
    workers: int = 1,
    stop_when: Optional[Callable[[R], bool]] = None,
) -> List[R]:
    """Apply `fn(shared, task)` to each task; stop after the first result matching `stop_when`.

    `shared` is shipped once per worker process, not once per task. The returned
    list is a prefix of the task order.
    """
    results: List[R] = []
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            r = fn(shared, task)
            results.append(r)
            if stop_when is not None and stop_when(r):
                break
        return results

    pool = ProcessPoolExecutor(
        max_workers=min(workers, len(tasks)), initializer=_install_shared, initargs=(shared,)
    )
    try:
        futures = [pool.submit(_call, fn, task) for task in tasks]
        for i, fut in enumerate(futures):
            r = fut.result()
            results.append(r)
            if stop_when is not None and stop_when(r):
                logger.debug("Stopping after chunk %s of %s", i + 1, len(futures))
                break
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    return results
