"""Tests for the batch experiment runner."""

import pytest

from src.algebra.base_ring import PolynomialRing
from src.analysis.sato_tate import collect_point_traces
from src.drinfeld.module import drinfeld_create
from src.pipeline.experiment import ExperimentRunner


def square(x):
    return x * x


class TestExperimentRunner:
    """Test ordered mapping and trace collection."""

    def setup_method(self):
        self.module = drinfeld_create(PolynomialRing(3), [[0, 1], [1], [1]])

    def test_serial_map(self):
        """Test a single worker maps in order."""
        assert ExperimentRunner().map_ordered(square, range(5)) == [0, 1, 4, 9, 16]

    def test_parallel_map_keeps_order(self):
        """Test results come back in input order with several workers."""
        runner = ExperimentRunner(workers=2, chunksize=2)
        assert runner.map_ordered(square, range(20)) == [x * x for x in range(20)]

    def test_parallel_collect_matches_serial(self):
        """Test parallel trace collection merges to the serial result."""
        serial = collect_point_traces(self.module, 3, 1)
        parallel = ExperimentRunner(workers=2).collect(self.module, 3, 1)
        assert parallel == serial

    def test_workers_positive(self):
        """Test at least one worker is required."""
        with pytest.raises(ValueError):
            ExperimentRunner(workers=0)
