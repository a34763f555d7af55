"""Pydantic schema models for module descriptors, experiment records and reports."""

from datetime import datetime
from enum import Enum
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator


class CoefficientField(BaseModel):
    """Finite coefficient field F_q[X]/(modulus)."""
    d: int = Field(..., ge=1, description="Extension degree over F_q")
    modulus: List[int] = Field(..., description="Monic irreducible modulus, ascending coefficients")


class ModuleDescriptor(BaseModel):
    """Serialized Drinfeld module: phi_t = b_0 + b_1 tau + ... + b_n tau^n."""
    q: int = Field(..., ge=2, description="Size of the constant field F_q")
    field: Union[Literal["rational"], CoefficientField] = Field(
        ..., description='"rational" for coefficients in F_q[t], otherwise a finite field'
    )
    phi_t: List[List[int]] = Field(
        ..., min_length=2, description="Coefficients b_0..b_n as ascending coefficient arrays"
    )


class GateStatus(str, Enum):
    """Outcome of an invariant gate."""
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


class CharPolyRecordModel(BaseModel):
    """Characteristic polynomial of Frobenius at one point."""
    p: List[int] = Field(..., description="The point: monic irreducible, ascending coefficients")
    m: int = Field(..., ge=1, description="Degree of the residue field over F_q")
    n: int = Field(..., ge=1, description="Rank")
    c: List[List[int]] = Field(..., description="c_0..c_{n-1} with P(T) = T^n + ... + c_0")
    a_x: List[int] = Field(..., description="Trace of Frobenius, -c_{n-1}")
    epsilon: Optional[int] = Field(None, description="Unit with (-1)^n c_0 = epsilon * p^(m/deg p)")
    hasse_ok: bool = Field(..., description="Whether n * deg(a_x) <= m")


class HistogramReportModel(BaseModel):
    """Empirical against theoretical distribution of normalized traces at one degree."""
    d: int = Field(..., ge=1, description="Degree of the points")
    n: int = Field(..., ge=1, description="Rank")
    q: int = Field(..., ge=2, description="Size of the constant field")
    j: int = Field(..., ge=1, description="Number of pi-adic digits per bucket")
    sample_size: int = Field(..., ge=0, description="Number of good points")
    buckets: Dict[str, int] = Field(..., description="Comma-joined residue digits to empirical count")
    theoretical: Dict[str, List[int]] = Field(
        ..., description="Comma-joined residue digits to [numerator, denominator]"
    )
    tv_distance: float = Field(..., ge=0, le=1, description="Total-variation distance")
    tv_distance_exact: List[int] = Field(..., description="Total-variation distance as [num, den]")
    max_deviation: float = Field(..., ge=0, description="Largest |empirical - theoretical| over buckets")
    strict_hasse_ok: bool = Field(True, description="deg a_x <= floor(d/n) for every point when n does not divide d")
    note: Optional[str] = Field(None, description="Interpretation caveat")


class CosetCountModel(BaseModel):
    """Exact count over a finite quotient of the division algebra."""
    condition: str = Field(..., description="Human-readable description of the counted set")
    count: int = Field(..., ge=0, description="Number of elements satisfying the condition")
    total: int = Field(..., ge=1, description="Size of the ambient finite set")
    exact_ratio_num: int = Field(..., ge=0, description="Reduced numerator of count/total")
    exact_ratio_den: int = Field(..., ge=1, description="Reduced denominator of count/total")


class FrobeniusIdentityModel(BaseModel):
    """Carlitz Frobenius identity at one prime."""
    prime: List[int] = Field(..., description="Monic irreducible, ascending coefficients")
    identity_holds: bool = Field(..., description="phi_p reduces to tau^deg(p)")
    charpoly_is_t_minus_p: bool = Field(..., description="frob_charpoly returns T - p")
    epsilon: Optional[int] = Field(None, description="Observed unit in c_0")


class TowerLevelModel(BaseModel):
    """One certified level of the Artin-Schreier tower."""
    level: int = Field(..., ge=0, description="Level j")
    degree: int = Field(..., ge=1, description="Degree [F(a_j):F]")
    certified: bool = Field(..., description="Whether a no-root certificate was found")
    certificate_prime: Optional[List[int]] = Field(None, description="Prime whose residue chain certifies the level")
    min_poly_chain: List[str] = Field(default_factory=list, description="Step polynomials X^q - X + t a_i over the previous level")
    residue_chain: List[List[int]] = Field(default_factory=list, description="Residues of a_1..a_(j-1) used")


class LangTrotterRowModel(BaseModel):
    """Lang-Trotter count for fixed trace at one degree."""
    d: int = Field(..., ge=1, description="Degree of the points")
    trace: List[int] = Field(..., description="Fixed trace a")
    count: int = Field(..., ge=0, description="P_{phi,a}(d)")
    good_points: int = Field(..., ge=0, description="Number of good points of degree d")
    partition_total: int = Field(..., ge=0, description="Sum of the counts over traces a with deg a <= d/n")
    ratio_bound: float = Field(..., description="count / q^((1-1/n^2) d)")
    ratio_heuristic: float = Field(..., description="count * d / q^((1-1/n) d)")
    filter_j: Optional[int] = Field(None, description="Precision of the trace filter, when defined")
    filter_count: Optional[int] = Field(None, description="Points whose normalized trace matches a to filter_j digits")
    filter_ratio: Optional[float] = Field(None, description="filter_count / good_points")
    haar_mass: Optional[float] = Field(None, description="q^-filter_j")


class ExperimentConfig(BaseModel):
    """Parameters of a batch experiment."""
    module: ModuleDescriptor = Field(..., description="Module under test")
    d_min: int = Field(1, ge=1, description="Smallest degree")
    d_max: int = Field(..., ge=1, description="Largest degree")
    prec_j: int = Field(1, ge=1, description="pi-adic digits per bucket")
    trace: Optional[List[int]] = Field(None, description="Fixed trace a for Lang-Trotter")
    out: Optional[str] = Field(None, description="Report output path")
    points_out: Optional[str] = Field(None, description="Per-point CSV output path")
    workers: int = Field(1, ge=1, description="Worker processes")

    @model_validator(mode="after")
    def check_degree_range(self) -> "ExperimentConfig":
        if self.d_min > self.d_max:
            raise ValueError(f"empty degree range [{self.d_min}, {self.d_max}]")
        return self


class RunManifest(BaseModel):
    """Run manifest for reproducibility."""
    run_id: str = Field(..., description="Unique run identifier")
    command: str = Field(..., description="CLI subcommand")
    started: datetime = Field(..., description="Run start timestamp")
    finished: Optional[datetime] = Field(None, description="Run end timestamp")
    parameters: Dict[str, object] = Field(default_factory=dict, description="Command parameters")
    outputs: List[str] = Field(default_factory=list, description="Files written")
    gates: Dict[str, str] = Field(default_factory=dict, description="Gate name to status")
