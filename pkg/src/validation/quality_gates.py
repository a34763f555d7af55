"""Invariant gates over experiment records."""

from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Sequence

import structlog

from ..analysis.lang_trotter import LangTrotterRow
from ..analysis.measure import LEMMA_CONSTANT, CosetCount
from ..analysis.sato_tate import HistogramReport
from ..common.errors import InvariantViolation
from ..common.schema import GateStatus
from ..drinfeld.frobenius import CharPolyRecord

logger = structlog.get_logger(__name__)


def _status(ok: bool) -> str:
    return GateStatus.PASS.value if ok else GateStatus.FAIL.value


class InvariantGates:
    """Checks that every produced record respects the exact invariants.

    Each check returns a dict with a "status" of PASS or FAIL plus the offending
    items; run_all_checks aggregates whichever inputs were given.
    """

    def check_hasse_bound(self, records: Sequence[CharPolyRecord]) -> Dict[str, Any]:
        """n deg(a_x) <= m for every charpoly record."""
        failures = [str(r.p) for r in records if not r.hasse_ok]
        result = {"checked": len(records), "failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Hasse bound violated", failures=failures)
        return result

    def check_normalized_valuation(self, reports: Sequence[HistogramReport]) -> Dict[str, Any]:
        """a_x pi^floor(d/n) lies in O_inf for every sampled point."""
        failures = [
            {"d": r.d, "prime": str(pt.prime)} for r in reports for pt in r.points if pt.valuation < 0
        ]
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Normalized trace outside O_inf", failures=failures)
        return result

    def check_strict_hasse(self, reports: Sequence[HistogramReport]) -> Dict[str, Any]:
        """deg a_x <= floor(d/n) at every point of a degree d not divisible by n."""
        failures = [r.d for r in reports if r.d % r.n and not r.strict_hasse_ok]
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Strict Hasse inequality violated", degrees=failures)
        return result

    def check_mass_sums(self, reports: Sequence[HistogramReport]) -> Dict[str, Any]:
        """Theoretical masses sum to 1 and empirical counts to the sample size."""
        failures = []
        for r in reports:
            mass = sum(r.theoretical.values(), Fraction(0))
            count = sum(r.buckets.values())
            if mass != 1 or count != r.sample_size:
                failures.append({"d": r.d, "mass": str(mass), "count": count, "sample_size": r.sample_size})
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Mass sums off", failures=failures)
        return result

    def check_tv_tolerances(
        self, reports: Sequence[HistogramReport], tolerances: Mapping[int, float]
    ) -> Dict[str, Any]:
        """Statistical gate: one degree over its TV tolerance asks for a rerun, two fail."""
        misses = [
            {"d": r.d, "tv_distance": float(r.tv_distance), "tolerance": tolerances[r.d]}
            for r in reports
            if r.d in tolerances and r.tv_distance > Fraction(str(tolerances[r.d]))
        ]
        result: Dict[str, Any] = {
            "checked": sum(1 for r in reports if r.d in tolerances),
            "misses": misses,
            "rerun": len(misses) == 1,
            "status": _status(len(misses) < 2),
        }
        if len(misses) == 1:
            logger.warning("TV tolerance missed at one degree, rerun suggested", miss=misses[0])
        elif misses:
            logger.error("TV tolerances missed", misses=misses)
        return result

    def check_partition(self, rows: Sequence[LangTrotterRow]) -> Dict[str, Any]:
        """Counts over all traces add up to the number of good points."""
        failures = [r.d for r in rows if not r.partition_ok]
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Lang-Trotter partition identity fails", degrees=failures)
        return result

    def check_filter_bound(self, rows: Sequence[LangTrotterRow]) -> Dict[str, Any]:
        """P_{phi,a}(d) never exceeds the count of points passing the trace filter."""
        failures = [r.d for r in rows if not r.filter_ok]
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Filter bound exceeded", degrees=failures)
        return result

    def check_coset_totals(self, partitions: Sequence[Mapping[Any, CosetCount]]) -> Dict[str, Any]:
        """Counts of disjoint trace residues add up to the size of the scope."""
        failures = []
        for partition in partitions:
            counts = list(partition.values())
            if not counts:
                continue
            total = counts[0].total
            summed = sum(c.count for c in counts)
            if summed != total or any(c.total != total for c in counts):
                first = counts[0]
                failures.append({"scope": first.scope.value, "n": first.n, "j": first.j, "sum": summed})
        result = {"failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Coset partition totals off", failures=failures)
        return result

    def check_vanishing_trace(self, lemmas: Sequence[CosetCount]) -> Dict[str, Any]:
        """Proportion of trace-zero classes stays within LEMMA_CONSTANT q^-j."""
        failures = [
            {"n": c.n, "q": c.q, "j": c.j, "ratio": str(c.ratio)}
            for c in lemmas
            if c.ratio > Fraction(LEMMA_CONSTANT, c.q**c.j)
        ]
        result = {"checked": len(lemmas), "failures": failures, "status": _status(not failures)}
        if failures:
            logger.error("Vanishing-trace proportion above bound", failures=failures)
        return result

    def run_all_checks(
        self,
        records: Optional[Sequence[CharPolyRecord]] = None,
        reports: Optional[Sequence[HistogramReport]] = None,
        rows: Optional[Sequence[LangTrotterRow]] = None,
        partitions: Optional[Sequence[Mapping[Any, CosetCount]]] = None,
        tolerances: Optional[Mapping[int, float]] = None,
        lemmas: Optional[Sequence[CosetCount]] = None,
    ) -> Dict[str, Any]:
        """Run every check whose input was given."""
        results: Dict[str, Any] = {}
        if records is not None:
            results["hasse_bound"] = self.check_hasse_bound(records)
        if reports is not None:
            results["normalized_valuation"] = self.check_normalized_valuation(reports)
            results["strict_hasse"] = self.check_strict_hasse(reports)
            results["mass_sums"] = self.check_mass_sums(reports)
            if tolerances:
                results["tv_tolerance"] = self.check_tv_tolerances(reports, tolerances)
        if rows is not None:
            results["partition"] = self.check_partition(rows)
            results["filter_bound"] = self.check_filter_bound(rows)
        if partitions is not None:
            results["coset_totals"] = self.check_coset_totals(partitions)
        if lemmas is not None:
            results["vanishing_trace"] = self.check_vanishing_trace(lemmas)

        all_passed = all(r.get("status") == GateStatus.PASS.value for r in results.values())
        results["overall_status"] = _status(all_passed)
        logger.info("Invariant gates", overall_status=results["overall_status"], checks=len(results) - 1)
        return results


def gate_summary(results: Mapping[str, Any]) -> Dict[str, str]:
    """Check name to status, for run manifests."""
    return {name: r["status"] for name, r in results.items() if name != "overall_status"}


def enforce(results: Mapping[str, Any]) -> None:
    """Raise InvariantViolation when any gate failed."""
    if results.get("overall_status") != GateStatus.PASS.value:
        failed = [name for name, status in gate_summary(results).items() if status != GateStatus.PASS.value]
        raise InvariantViolation(f"invariant gates failed: {', '.join(failed)}")
