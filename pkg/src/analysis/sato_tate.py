"""Distribution of normalized Frobenius traces against the limit law."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import structlog

from ..algebra.base_ring import BasePoly, irreducible_monics
from ..algebra.laurent import LaurentSeries, expand_at_infinity, normalized_residue
from ..common.errors import ModuleError
from ..common.schema import ExperimentConfig, HistogramReportModel
from ..drinfeld.frobenius import charpoly_at
from ..drinfeld.module import DrinfeldModule, from_descriptor, has_good_reduction
from .measure import Residue, all_residues, parse_residue_key, residue_key, theoretical_measure

logger = structlog.get_logger(__name__)

SURJECTIVITY_NOTE = (
    "conformance is measured against the law for surjective rho_inf; a large distance "
    "means either a non-surjective image or small-sample noise"
)


@dataclass(frozen=True)
class PointTrace:
    """Trace of Frobenius at one good point and its bucket."""

    d: int
    prime: BasePoly
    a_x: BasePoly
    bucket: Residue
    valuation: float
    hasse_ok: bool
    strict_hasse_ok: bool


@dataclass(frozen=True)
class HistogramReport:
    d: int
    n: int
    q: int
    j: int
    sample_size: int
    buckets: dict[Residue, int]
    theoretical: dict[Residue, Fraction]
    tv_distance: Fraction
    max_deviation: Fraction
    strict_hasse_ok: bool = True
    note: Optional[str] = None
    points: tuple[PointTrace, ...] = field(default=(), compare=False)

    def to_model(self) -> HistogramReportModel:
        return HistogramReportModel(
            d=self.d,
            n=self.n,
            q=self.q,
            j=self.j,
            sample_size=self.sample_size,
            buckets={residue_key(k): self.buckets[k] for k in sorted(self.buckets)},
            theoretical={
                residue_key(k): [self.theoretical[k].numerator, self.theoretical[k].denominator]
                for k in sorted(self.theoretical)
            },
            tv_distance=float(self.tv_distance),
            tv_distance_exact=[self.tv_distance.numerator, self.tv_distance.denominator],
            max_deviation=float(self.max_deviation),
            strict_hasse_ok=self.strict_hasse_ok,
            note=self.note,
        )

    @classmethod
    def from_model(cls, model: HistogramReportModel) -> HistogramReport:
        buckets = {parse_residue_key(k): v for k, v in model.buckets.items()}
        theoretical = {parse_residue_key(k): Fraction(v[0], v[1]) for k, v in model.theoretical.items()}
        return cls(
            d=model.d,
            n=model.n,
            q=model.q,
            j=model.j,
            sample_size=model.sample_size,
            buckets=buckets,
            theoretical=theoretical,
            tv_distance=Fraction(model.tv_distance_exact[0], model.tv_distance_exact[1]),
            max_deviation=tv_distance(buckets, theoretical)[1],
            strict_hasse_ok=model.strict_hasse_ok,
            note=model.note,
        )


def enumerate_good_points(module: DrinfeldModule, d: int) -> list[BasePoly]:
    """Monic irreducibles of degree d at which phi keeps its rank."""
    if not module.is_generic:
        raise ModuleError("good points are defined for generic-characteristic modules")
    return [p for p in irreducible_monics(module.q, d) if has_good_reduction(module, p)]


def normalized_trace(a_x: BasePoly, d: int, n: int, j: int) -> LaurentSeries:
    """a_x pi^floor(d/n), known at least up to pi^j."""
    prec = j + max(a_x.degree, 0) + 1
    return expand_at_infinity(a_x, prec).shift(d // n)


def trace_bucket(a_x: BasePoly, d: int, n: int, j: int) -> Residue:
    """First j pi-adic digits of the normalized trace.

    Digit k is the coefficient of t^(floor(d/n) - k) in a_x.
    """
    return normalized_residue(normalized_trace(a_x, d, n, j), j)


def point_trace(module: DrinfeldModule, p: BasePoly, j: int) -> PointTrace:
    record = charpoly_at(module, p)
    d, n = p.degree, module.rank
    series = normalized_trace(record.a_x, d, n, j)
    valuation = series.valuation()
    strict = d % n == 0 or record.a_x.degree <= d // n
    return PointTrace(
        d=d,
        prime=p,
        a_x=record.a_x,
        bucket=normalized_residue(series, j) if valuation >= 0 else (),
        valuation=valuation,
        hasse_ok=record.hasse_ok,
        strict_hasse_ok=strict,
    )


def collect_point_traces(module: DrinfeldModule, d: int, j: int) -> list[PointTrace]:
    """point_trace for every good point of degree d, in enumeration order."""
    return [point_trace(module, p, j) for p in enumerate_good_points(module, d)]


# (module, d, j) -> traces; the parallel runner in the pipeline has this shape
TraceCollector = Callable[[DrinfeldModule, int, int], list[PointTrace]]


def tv_distance(counts: dict[Residue, int], masses: dict[Residue, Fraction]) -> tuple[Fraction, Fraction]:
    """Exact total-variation distance and largest bucket deviation."""
    total = sum(counts.values())
    if total == 0:
        return Fraction(0), Fraction(0)
    deviations = [
        abs(Fraction(counts.get(k, 0), total) - masses.get(k, Fraction(0))) for k in set(counts) | set(masses)
    ]
    return sum(deviations, Fraction(0)) / 2, max(deviations, default=Fraction(0))


def build_histogram(points: Sequence[PointTrace], d: int, n: int, q: int, j: int) -> HistogramReport:
    masses = theoretical_measure(n, q, j, d % n)
    counts = {kappa: 0 for kappa in all_residues(q, j)}
    for pt in points:
        if pt.bucket in counts:
            counts[pt.bucket] += 1
    tv, worst = tv_distance(counts, masses)
    notes = [SURJECTIVITY_NOTE]
    if not points:
        notes.append("no good points at this degree")
    return HistogramReport(
        d=d,
        n=n,
        q=q,
        j=j,
        sample_size=len(points),
        buckets=counts,
        theoretical=masses,
        tv_distance=tv,
        max_deviation=worst,
        strict_hasse_ok=all(pt.strict_hasse_ok for pt in points),
        note="; ".join(notes),
        points=tuple(points),
    )


def sato_tate_histogram(
    config: ExperimentConfig, collector: Optional[TraceCollector] = None
) -> list[HistogramReport]:
    """One HistogramReport per degree in [d_min, d_max]."""
    module = from_descriptor(config.module)
    if not module.is_generic:
        raise ModuleError("Sato-Tate experiments need a module over F_q(t)")
    collect = collector or collect_point_traces
    reports = []
    for d in range(config.d_min, config.d_max + 1):
        points = collect(module, d, config.prec_j)
        report = build_histogram(points, d, module.rank, module.q, config.prec_j)
        logger.info(
            "Sato-Tate degree done",
            d=d,
            sample_size=report.sample_size,
            tv_distance=float(report.tv_distance),
        )
        reports.append(report)
    return reports
