"""Exact measures of trace conditions on finite quotients of O_D.

Every set whose measure matters here is a union of cosets of pi^j O_D, so its
measure is a ratio of integer counts on O_D / pi^j O_D = (O_W / p^j)^n. The
reduced trace only sees a_0 = x_0 + x_1 pi + ... + x_(j-1) pi^(j-1), and its
residue modulo pi^j is (Tr x_0, ..., Tr x_(j-1)).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import structlog

from ..algebra.finite_field import absolute_trace, field_create
from ..common.errors import QuotientTooLarge
from ..common.schema import CosetCountModel

logger = structlog.get_logger(__name__)

DEFAULT_QUOTIENT_CAP = 2_000_000

# trace residue digits, pi^0 first
Residue = tuple[int, ...]


class CountScope(str, Enum):
    """Which finite set the trace condition is counted on."""

    W_UNITS = "W_units"
    W = "W"
    D_NONPI = "D_nonpi"


@dataclass(frozen=True)
class TraceCondition:
    """Trace residues modulo pi^j, each a tuple of j F_q labels."""

    residues: frozenset[Residue]
    label: str

    @classmethod
    def equals(cls, kappa: Sequence[int]) -> TraceCondition:
        return cls(frozenset([tuple(kappa)]), "tr = " + ",".join(str(k) for k in kappa))

    @classmethod
    def any_of(cls, residues: Iterable[Sequence[int]], label: Optional[str] = None) -> TraceCondition:
        members = frozenset(tuple(r) for r in residues)
        return cls(members, label or "tr in {" + "; ".join(",".join(map(str, r)) for r in sorted(members)) + "}")

    @classmethod
    def vanishing(cls, j: int) -> TraceCondition:
        return cls(frozenset([(0,) * j]), f"tr = 0 mod pi^{j}")

    @classmethod
    def everything(cls, q: int, j: int) -> TraceCondition:
        return cls(frozenset(all_residues(q, j)), "any trace")

    def __contains__(self, residue: object) -> bool:
        return residue in self.residues


@dataclass(frozen=True)
class CosetCount:
    """count elements of the scope satisfy the condition, out of total."""

    n: int
    q: int
    j: int
    scope: CountScope
    condition: TraceCondition
    count: int
    total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count, self.total)

    def to_model(self) -> CosetCountModel:
        ratio = self.ratio
        return CosetCountModel(
            condition=f"n={self.n} q={self.q} j={self.j} {self.scope.value}: {self.condition.label}",
            count=self.count,
            total=self.total,
            exact_ratio_num=ratio.numerator,
            exact_ratio_den=ratio.denominator,
        )


def all_residues(q: int, j: int) -> list[Residue]:
    """O_inf / pi^j in lexicographic order of the digit tuples."""
    return list(itertools.product(range(q), repeat=j))


def quotient_size(n: int, q: int, j: int) -> int:
    """|O_W / p^j| = q^(n j)."""
    return q ** (n * j)


@lru_cache(maxsize=None)
def _trace_table(n: int, q: int) -> tuple[int, ...]:
    """Tr_{F_q^n / F_q} of each element of F_q^n in enumeration order; index 0 is zero."""
    W = field_create(q, n)
    return tuple(absolute_trace(x) for x in W.elements())


def _count_with_leading(traces: Sequence[int], x0: int, j: int, condition: TraceCondition) -> int:
    """a_0 with the given pi^0 digit whose trace residue satisfies condition."""
    lead = traces[x0]
    count = 0
    for rest in itertools.product(traces, repeat=j - 1):
        if (lead,) + rest in condition:
            count += 1
    return count


def _count_a0(n: int, q: int, j: int, condition: TraceCondition, leading: Iterable[int]) -> int:
    traces = _trace_table(n, q)
    return sum(_count_with_leading(traces, x0, j, condition) for x0 in leading)


def _check_cap(n: int, q: int, j: int, cap: int) -> None:
    size = quotient_size(n, q, j)
    if size > cap:
        raise QuotientTooLarge(f"O_W/p^{j} has {size} elements for n={n}, q={q}; cap is {cap}")


def coset_count(
    n: int,
    q: int,
    j: int,
    condition: TraceCondition,
    scope: CountScope = CountScope.W_UNITS,
    cap: int = DEFAULT_QUOTIENT_CAP,
) -> CosetCount:
    """Exact count of the elements of the scope whose reduced trace satisfies condition.

    W_units and W enumerate a_0 directly. For D_nonpi the components a_1..a_(n-1)
    are free, so the count is assembled from the a_0 counts:
    #{a_0 : cond} |O_W/p^j|^(n-1) - #{a_0 in p : cond} |p/p^j|^(n-1).
    """
    if j < 1:
        raise ValueError(f"precision j must be at least 1, got {j}")
    _check_cap(n, q, j, cap)
    size = q**n
    units = range(1, size)
    if scope is CountScope.W_UNITS:
        count = _count_a0(n, q, j, condition, units)
        total = (size - 1) * quotient_size(n, q, j - 1)
    elif scope is CountScope.W:
        count = _count_a0(n, q, j, condition, range(size))
        total = quotient_size(n, q, j)
    else:
        full, ideal = quotient_size(n, q, j), quotient_size(n, q, j - 1)
        in_ideal = _count_a0(n, q, j, condition, [0])
        everywhere = in_ideal + _count_a0(n, q, j, condition, units)
        count = everywhere * full ** (n - 1) - in_ideal * ideal ** (n - 1)
        total = full**n - ideal**n
    result = CosetCount(n=n, q=q, j=j, scope=scope, condition=condition, count=count, total=total)
    logger.debug("Coset count", n=n, q=q, j=j, scope=scope.value, condition=condition.label, count=count, total=total)
    return result


def coset_count_exhaustive(
    n: int, q: int, j: int, condition: TraceCondition, cap: int = DEFAULT_QUOTIENT_CAP
) -> CosetCount:
    """D_nonpi count by walking all of (O_W / p^j)^n; only for tiny quotients."""
    size = quotient_size(n, q, j) ** n
    if size > cap:
        raise QuotientTooLarge(f"O_D/pi^{j} O_D has {size} elements; cap is {cap}")
    traces = _trace_table(n, q)
    digits = range(q**n)
    components = list(itertools.product(digits, repeat=j))
    count = total = 0
    for alpha in itertools.product(components, repeat=n):
        # alpha lies in pi O_D when every component has zero pi^0 digit
        if all(a[0] == 0 for a in alpha):
            continue
        total += 1
        if tuple(traces[x] for x in alpha[0]) in condition:
            count += 1
    return CosetCount(n=n, q=q, j=j, scope=CountScope.D_NONPI, condition=condition, count=count, total=total)


def coset_partition(
    n: int, q: int, j: int, scope: CountScope = CountScope.W_UNITS, cap: int = DEFAULT_QUOTIENT_CAP
) -> dict[Residue, CosetCount]:
    """coset_count of every single trace residue; the counts partition the scope."""
    return {
        kappa: coset_count(n, q, j, TraceCondition.equals(kappa), scope=scope, cap=cap)
        for kappa in all_residues(q, j)
    }


def trace_histogram(n: int, q: int, j: int, units_only: bool = True) -> Counter[Residue]:
    """Trace residues of all a_0 in (O_W - p)/p^j (or O_W/p^j), counted by residue."""
    traces = _trace_table(n, q)
    leading = range(1, q**n) if units_only else range(q**n)
    hist: Counter[Residue] = Counter()
    for x0 in leading:
        for rest in itertools.product(traces, repeat=j - 1):
            hist[(traces[x0],) + rest] += 1
    return hist


LEMMA_CONSTANT = 2


def vanishing_trace_proportion(n: int, q: int, j: int, cap: int = DEFAULT_QUOTIENT_CAP) -> CosetCount:
    """#{alpha in (O_D - pi O_D)/pi^j : tr alpha = 0 mod pi^j} over #((O_D - pi O_D)/pi^j)."""
    return coset_count(n, q, j, TraceCondition.vanishing(j), scope=CountScope.D_NONPI, cap=cap)


def theoretical_measure(n: int, q: int, j: int, d_mod_n: int) -> dict[Residue, Fraction]:
    """Limit law of a_x pi^floor(d/n) on the buckets of O_inf / pi^j.

    Uniform q^-j when n does not divide d. Otherwise a bucket gets
    (q^(n-1) - 1)/(q^n - 1) q^-(j-1) when its pi^0 digit is zero and
    q^(n-1)/(q^n - 1) q^-(j-1) when it is not, which is the distribution of
    Tr(a_0) for a_0 uniform in (O_W - p)/p^j.
    """
    if j < 1:
        raise ValueError(f"precision j must be at least 1, got {j}")
    keys = all_residues(q, j)
    if d_mod_n % n:
        mass = Fraction(1, q**j)
        return {kappa: mass for kappa in keys}
    tail = Fraction(1, q ** (j - 1))
    zero_mass = Fraction(q ** (n - 1) - 1, q**n - 1) * tail
    unit_mass = Fraction(q ** (n - 1), q**n - 1) * tail
    return {kappa: (zero_mass if kappa[0] == 0 else unit_mass) for kappa in keys}


def literal_nu_measure(n: int, q: int, j: int) -> dict[Residue, Fraction]:
    """The degree-divisible law with the coset factors applied to Haar masses q^-j, unnormalized."""
    haar = Fraction(1, q**j)
    zero_factor = Fraction(q ** (n - 1) - 1, q**n - 1)
    unit_factor = Fraction(q ** (n - 1), q**n - 1)
    return {kappa: (zero_factor if kappa[0] == 0 else unit_factor) * haar for kappa in all_residues(q, j)}


@dataclass(frozen=True)
class NormalizationDiscrepancy:
    """Total mass of the literal coset-factor law against the normalized one."""

    n: int
    q: int
    j: int
    normalized_total: Fraction
    literal_total: Fraction

    @property
    def missing_factor(self) -> Fraction:
        return self.normalized_total / self.literal_total

    @property
    def note(self) -> str:
        return (
            f"coset factors applied to Haar masses sum to {self.literal_total}, not 1; "
            f"the normalized law used for comparisons is larger by a factor {self.missing_factor}"
        )


def nu_normalization_discrepancy(n: int, q: int, j: int) -> NormalizationDiscrepancy:
    return NormalizationDiscrepancy(
        n=n,
        q=q,
        j=j,
        normalized_total=sum(theoretical_measure(n, q, j, 0).values(), Fraction(0)),
        literal_total=sum(literal_nu_measure(n, q, j).values(), Fraction(0)),
    )


def residue_key(residue: Residue) -> str:
    """Report key of a residue: comma-joined digits."""
    return ",".join(str(k) for k in residue)


def parse_residue_key(key: str) -> Residue:
    return tuple(int(k) for k in key.split(",")) if key else ()
