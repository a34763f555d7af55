"""Tests for Pydantic schema models."""

import pytest
from datetime import datetime
from pydantic import ValidationError
from src.common.schema import (
    CharPolyRecordModel, CosetCountModel, ExperimentConfig, GateStatus,
    HistogramReportModel, LangTrotterRowModel, ModuleDescriptor, RunManifest, TowerLevelModel
)


class TestModuleDescriptor:
    """Test ModuleDescriptor model validation."""

    def test_rational_module(self):
        """Test a module over F_q(t)."""
        descriptor = ModuleDescriptor(q=3, field="rational", phi_t=[[0, 1], [1], [1]])
        assert descriptor.field == "rational"
        assert len(descriptor.phi_t) == 3

    def test_finite_field_module(self):
        """Test a module over F_4 given by its modulus."""
        descriptor = ModuleDescriptor.model_validate(
            {"q": 2, "field": {"d": 2, "modulus": [1, 1, 1]}, "phi_t": [[0, 1], [1]]}
        )
        assert descriptor.field.d == 2
        assert descriptor.field.modulus == [1, 1, 1]

    def test_q_too_small(self):
        """Test q must be at least 2."""
        with pytest.raises(ValidationError):
            ModuleDescriptor(q=1, field="rational", phi_t=[[0, 1], [1]])

    def test_unknown_field(self):
        """Test only "rational" or a coefficient field are accepted."""
        with pytest.raises(ValidationError):
            ModuleDescriptor(q=2, field="adic", phi_t=[[0, 1], [1]])


class TestExperimentConfig:
    """Test ExperimentConfig validation."""

    def setup_method(self):
        self.module = ModuleDescriptor(q=3, field="rational", phi_t=[[0, 1], [1], [1]])

    def test_defaults(self):
        """Test d_min, prec_j and workers default to 1."""
        config = ExperimentConfig(module=self.module, d_max=4)
        assert (config.d_min, config.prec_j, config.workers) == (1, 1, 1)

    def test_degree_range(self):
        """Test d_min must not exceed d_max."""
        with pytest.raises(ValidationError):
            ExperimentConfig(module=self.module, d_min=5, d_max=4)

    def test_precision_positive(self):
        """Test j >= 1."""
        with pytest.raises(ValidationError):
            ExperimentConfig(module=self.module, d_max=4, prec_j=0)


class TestRecordModels:
    """Test the exported record models."""

    def test_charpoly_record(self):
        """Test a charpoly record with epsilon."""
        record = CharPolyRecordModel(p=[0, 1], m=1, n=2, c=[[0, 1], [1]], a_x=[1], epsilon=1, hasse_ok=True)
        assert record.a_x == [1]

    def test_charpoly_rank_positive(self):
        """Test n >= 1."""
        with pytest.raises(ValidationError):
            CharPolyRecordModel(p=[0, 1], m=1, n=0, c=[], a_x=[], hasse_ok=True)

    def test_histogram_tv_range(self):
        """Test the TV distance lies in [0, 1]."""
        with pytest.raises(ValidationError):
            HistogramReportModel(
                d=3, n=2, q=2, j=1, sample_size=2, buckets={"0": 1, "1": 1},
                theoretical={"0": [1, 2], "1": [1, 2]}, tv_distance=1.5,
                tv_distance_exact=[3, 2], max_deviation=0.5
            )

    def test_coset_count_total(self):
        """Test the total of a coset count is positive."""
        with pytest.raises(ValidationError):
            CosetCountModel(condition="empty", count=0, total=0, exact_ratio_num=0, exact_ratio_den=1)

    def test_tower_level(self):
        """Test residue_chain defaults to empty."""
        level = TowerLevelModel(level=0, degree=1, certified=True)
        assert level.residue_chain == []
        assert level.certificate_prime is None

    def test_lang_trotter_row(self):
        """Test optional filter fields default to None."""
        row = LangTrotterRowModel(
            d=3, trace=[1], count=2, good_points=8, partition_total=8, ratio_bound=0.5, ratio_heuristic=0.1
        )
        assert row.filter_j is None
        assert row.haar_mass is None


class TestRunManifest:
    """Test RunManifest model."""

    def test_manifest(self):
        """Test a manifest with gates."""
        manifest = RunManifest(
            run_id="run_test",
            command="sato-tate",
            started=datetime.now(),
            gates={"mass_sums": GateStatus.PASS.value},
        )
        assert manifest.outputs == []
        assert manifest.finished is None
        assert manifest.gates["mass_sums"] == "PASS"
