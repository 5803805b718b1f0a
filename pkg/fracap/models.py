"""Pydantic Models for fracap.

Report and option models shared by the analysis modules, the scenario runner and
the CLI.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import get_settings

# Absolute slack when checking total = lebesgue + gagliardo
BREAKDOWN_TOL = 1e-12


class ModularBreakdown(BaseModel):
    """Split of the Sobolev modular into its two terms."""

    lebesgue_term: float = Field(..., ge=0, description="Sum of |u|^q h^n over cells")
    gagliardo_term: float = Field(..., ge=0, description="Singular double sum")
    total: float = Field(..., ge=0)

    @model_validator(mode="after")
    def check_total(self) -> ModularBreakdown:
        expected = self.lebesgue_term + self.gagliardo_term
        if abs(self.total - expected) > BREAKDOWN_TOL * max(1.0, expected):
            raise ValueError(f"total {self.total} != {self.lebesgue_term} + {self.gagliardo_term}")
        return self


class NormReport(BaseModel):
    """Result of a Luxembourg-type bisection."""

    value: float = Field(..., ge=0)
    lo: float = Field(..., ge=0, description="Lower end of the final bracket")
    hi: float = Field(..., ge=0, description="Upper end of the final bracket")
    iterations: int = Field(..., ge=0)
    residual: float = Field(..., ge=0, description="|rho(u / value) - 1|, 0 for the zero function")
    history: list[float] = Field(default_factory=list, description="Residual per iteration")

    @model_validator(mode="after")
    def check_bracket(self) -> NormReport:
        if not self.lo <= self.value <= self.hi:
            raise ValueError(f"value {self.value} outside bracket [{self.lo}, {self.hi}]")
        return self


class SeriesPoint(BaseModel):
    """One point of a refinement series."""

    resolution: int
    value: float


class ModulusEstimate(BaseModel):
    """Sampled regularity modulus with its maximizing pair and refinement trend."""

    modulus: float = Field(..., ge=0)
    samples: int = Field(..., ge=2)
    witness: list[list[float]] | None = Field(
        None, description="Points attaining the modulus (None when it is 0)"
    )
    refinement: list[SeriesPoint] = Field(default_factory=list)
    diverging: bool = False


class MaskIndices(BaseModel):
    """Serialized SetMask: sorted cell and boundary-node indices."""

    cells: list[int] = Field(default_factory=list)
    boundary: list[int] = Field(default_factory=list)


class AxiomCheck(BaseModel):
    """Outcome of one capacity property check.

    margin is the smallest (right side - left side) over all instances checked;
    a property passes when margin >= -tolerance.
    """

    name: str
    passed: bool
    margin: float
    checks: int = Field(..., ge=0)
    detail: str = ""


class AxiomReport(BaseModel):
    """Capacity property checks over a family of sets."""

    checks: list[AxiomCheck]
    capacities: list[float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def get(self, name: str) -> AxiomCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


class CertificateRecord(BaseModel):
    """Per-index entry of a convergence certificate."""

    index: int = Field(..., ge=1)
    gap: float = Field(..., ge=0)
    gap_limit: float | None = None
    threshold: float = Field(..., gt=0, description="Level 2^-i defining the exceptional set")
    bound: float = Field(..., ge=0, description="Certified capacity upper bound")
    bound_limit: float = Field(..., ge=0)
    exceptional_set: MaskIndices
    holds: bool


class ConvergenceCertificate(BaseModel):
    """Quasi-uniform convergence certificate for a fast Cauchy sequence."""

    records: list[CertificateRecord]
    verdict: bool
    tail_start: int = Field(..., ge=1)
    tail_set: MaskIndices
    tail_bound: float = Field(..., ge=0, description="Sum of recorded bounds from tail_start")
    tail_limit: float = Field(..., ge=0, description="Partial sum of 4^-i from tail_start")
    uniform_off_tail: bool = Field(..., description="|u_{i+1} - u_i| <= 2^-i off the tail set")
    cauchy_tail: float = Field(..., ge=0, description="Partial sum of 2^-i from tail_start")


class LimitCertificate(BaseModel):
    """Subsequence certificate for a sequence converging to a known limit."""

    indices: list[int]
    records: list[CertificateRecord]
    polar_bound: float = Field(..., ge=0)
    verdict: bool


class MembershipReport(BaseModel):
    """Zero-trace membership decision with diagnostics."""

    member: bool
    deficiency: float = Field(..., ge=0)
    epsilon: float = Field(..., gt=0)
    delta: float = Field(..., gt=0)
    offending_nodes: list[int] = Field(default_factory=list)


class PolarityReport(BaseModel):
    """Boundary capacity across resolutions."""

    capacity: float = Field(..., ge=0, description="Boundary capacity at the finest resolution")
    series: list[SeriesPoint]
    verdict: str


class TestSetComparison(BaseModel):
    """Capacity of one test set on Omega and on Omega minus N."""

    __test__ = False

    test_set: MaskIndices
    full: float = Field(..., ge=0)
    reduced: float = Field(..., ge=0)
    discrepancy: float = Field(..., ge=0)


class RemovabilityReport(BaseModel):
    """Removable-set criterion at a tolerance."""

    removed: MaskIndices
    capacity_of_removed: float = Field(
        ..., ge=0, description="C(N), measured through the one-ring hull of N"
    )
    open_capacity: float = Field(
        ..., ge=0, description="Capacity of N's cells taken as a relatively open set"
    )
    comparisons: list[TestSetComparison]
    max_discrepancy: float = Field(..., ge=0)
    tolerance: float = Field(..., gt=0)
    removable: bool
    within_hull_bound: bool = Field(
        ..., description="max_discrepancy <= capacity_of_removed up to the solver tolerance"
    )


def _setting(name: str):  # type: ignore[no-untyped-def]
    return lambda: getattr(get_settings(), name)


class SolverOptions(BaseModel):
    """Projected-gradient options; defaults come from Settings."""

    model_config = ConfigDict(extra="forbid")

    max_iterations: int = Field(default_factory=_setting("max_iterations"), ge=1)
    gradient_tolerance: float = Field(default_factory=_setting("gradient_tolerance"), gt=0)
    decrease_tolerance: float = Field(default_factory=_setting("decrease_tolerance"), gt=0)
    kkt_tolerance: float = Field(default_factory=_setting("kkt_tolerance"), gt=0)
    armijo_shrink: float = Field(default_factory=_setting("armijo_shrink"), gt=0, lt=1)
    armijo_slope: float = Field(default_factory=_setting("armijo_slope"), gt=0, lt=1)
