"""Order-preserving parallel map used by the searches.

Results are consumed in enumeration order, so the first hit does not depend
on how many workers ran or which finished first.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_JOBS = None
WARMUP = 64
BATCH = 256


def default_jobs() -> int:
    if _JOBS is not None:
        return _JOBS
    return os.cpu_count() or 1


def set_default_jobs(jobs: int | None) -> None:
    global _JOBS
    _JOBS = jobs


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int | None = None) -> Iterator[tuple[T, R]]:
    """Yield ``(item, fn(item))`` lazily and in input order.

    The first ``WARMUP`` items run in-process; a pool is started only if the
    caller keeps consuming past them.
    """
    jobs = default_jobs() if jobs is None else jobs
    it = iter(items)
    for item in itertools.islice(it, WARMUP):
        yield item, fn(item)
    if jobs <= 1:
        for item in it:
            yield item, fn(item)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        while True:
            batch = list(itertools.islice(it, BATCH * jobs))
            if not batch:
                return
            for item, res in zip(batch, pool.map(fn, batch, chunksize=BATCH // 4)):
                yield item, res
