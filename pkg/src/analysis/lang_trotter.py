"""Lang-Trotter counts P_{phi,a}(d): good points of degree d with trace a."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import structlog

from ..algebra.base_ring import BasePoly, polys_of_degree_at_most
from ..common.errors import ModuleError
from ..common.schema import LangTrotterRowModel
from ..drinfeld.module import DrinfeldModule
from .sato_tate import PointTrace, TraceCollector, collect_point_traces, enumerate_good_points

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class LangTrotterRow:
    d: int
    trace: BasePoly
    count: int
    good_points: int
    partition_total: int
    ratio_bound: float
    ratio_heuristic: float
    filter_j: Optional[int] = None
    filter_count: Optional[int] = None

    @property
    def filter_ratio(self) -> Optional[float]:
        if self.filter_count is None or not self.good_points:
            return None
        return self.filter_count / self.good_points

    @property
    def haar_mass(self) -> Optional[float]:
        if self.filter_j is None:
            return None
        return float(self.trace.q) ** (-self.filter_j)

    @property
    def partition_ok(self) -> bool:
        return self.partition_total == self.good_points

    @property
    def filter_ok(self) -> bool:
        return self.filter_count is None or self.count <= self.filter_count

    def to_model(self) -> LangTrotterRowModel:
        return LangTrotterRowModel(
            d=self.d,
            trace=self.trace.to_list(),
            count=self.count,
            good_points=self.good_points,
            partition_total=self.partition_total,
            ratio_bound=self.ratio_bound,
            ratio_heuristic=self.ratio_heuristic,
            filter_j=self.filter_j,
            filter_count=self.filter_count,
            filter_ratio=self.filter_ratio,
            haar_mass=self.haar_mass,
        )


def trace_partition(points: Sequence[PointTrace]) -> Counter[BasePoly]:
    """Good points counted by their trace."""
    return Counter(pt.a_x for pt in points)


def filter_precision(a: BasePoly, d: int, n: int) -> Optional[int]:
    """Digits of a_x pi^ceil(d/n) matched against a in the counting filter.

    j = max(1, min(ord(a) + e, ord(a) + ceil(d/n^2))) with e = ceil(d/n); None when
    ord(a) + e < 1, where the filter says nothing. The trace a = 0 is treated
    like a nonzero constant.
    """
    e = -(-d // n)
    order = 0 if a.is_zero() else -a.degree
    j_max = order + e
    if j_max < 1:
        return None
    return max(1, min(j_max, order + -(-d // (n * n))))


def filter_count(points: Sequence[PointTrace], a: BasePoly, d: int, n: int, j: int) -> int:
    """Points with a_x pi^e = a pi^e mod pi^j, i.e. deg(a_x - a) <= e - j."""
    e = -(-d // n)
    return sum(1 for pt in points if (pt.a_x - a).degree <= e - j)


def admissible_traces(q: int, d: int, n: int) -> Iterator[BasePoly]:
    """Every a with deg a <= d/n, the traces the Hasse bound allows at degree d."""
    return polys_of_degree_at_most(q, d // n)


def partition_total(points: Sequence[PointTrace], q: int, d: int, n: int) -> int:
    """Sum of P_{phi,a}(d) over the admissible traces a."""
    partition = trace_partition(points)
    return sum(partition.get(a, 0) for a in admissible_traces(q, d, n))


def lang_trotter_row(
    points: Sequence[PointTrace], a: BasePoly, d: int, n: int, good_points: Optional[int] = None
) -> LangTrotterRow:
    """One row from the traced points; good_points defaults to their number."""
    q = a.q
    count = trace_partition(points).get(a, 0)
    j = filter_precision(a, d, n)
    return LangTrotterRow(
        d=d,
        trace=a,
        count=count,
        good_points=len(points) if good_points is None else good_points,
        partition_total=partition_total(points, q, d, n),
        ratio_bound=count / q ** ((1 - 1 / n**2) * d),
        ratio_heuristic=count * d / q ** ((1 - 1 / n) * d),
        filter_j=j,
        filter_count=None if j is None else filter_count(points, a, d, n, j),
    )


def lang_trotter_counts(
    module: DrinfeldModule,
    a: BasePoly,
    d_max: int,
    d_min: int = 1,
    collector: Optional[TraceCollector] = None,
) -> list[LangTrotterRow]:
    """P_{phi,a}(d) for d_min <= d <= d_max by full enumeration of good points."""
    if not module.is_generic:
        raise ModuleError("Lang-Trotter counts need a module over F_q(t)")
    if a.q != module.q:
        raise ModuleError(f"trace over F_{a.q} for a module over F_{module.q}")
    collect = collector or collect_point_traces
    rows = []
    for d in range(d_min, d_max + 1):
        good = len(enumerate_good_points(module, d))
        row = lang_trotter_row(collect(module, d, 1), a, d, module.rank, good_points=good)
        logger.info("Lang-Trotter degree done", d=d, trace=str(a), count=row.count, good_points=row.good_points)
        rows.append(row)
    return rows
