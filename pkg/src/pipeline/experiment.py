"""Batch experiment runner: per-point work fanned out over worker processes."""

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, Callable, Iterable, List, Sequence, TypeVar

import structlog

from ..algebra.base_ring import BasePoly
from ..analysis.sato_tate import PointTrace, enumerate_good_points, point_trace
from ..drinfeld.module import DrinfeldModule, from_descriptor, to_descriptor

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _point_trace_worker(descriptor: dict[str, Any], j: int, p: BasePoly) -> PointTrace:
    return point_trace(from_descriptor(descriptor), p, j)


class ExperimentRunner:
    """Maps picklable per-point functions over a process pool.

    Results come back in input order whatever the worker count, so every merge
    downstream is deterministic.
    """

    def __init__(self, workers: int = 1, chunksize: int = 8):
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self.workers = workers
        self.chunksize = chunksize

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        work: Sequence[T] = list(items)
        if self.workers == 1 or len(work) <= 1:
            return [fn(item) for item in work]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(fn, work, chunksize=self.chunksize))
        logger.debug("Parallel batch done", items=len(work), workers=self.workers)
        return results

    def collect(self, module: DrinfeldModule, d: int, j: int) -> List[PointTrace]:
        """Traces at every good point of degree d; a TraceCollector."""
        primes = enumerate_good_points(module, d)
        if self.workers == 1:
            return [point_trace(module, p, j) for p in primes]
        descriptor = to_descriptor(module).model_dump()
        return self.map_ordered(partial(_point_trace_worker, descriptor, j), primes)
