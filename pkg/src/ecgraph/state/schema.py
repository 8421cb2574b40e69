"""Records passed between the core modules and the report layer."""

from __future__ import annotations

import math
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


Command = Literal["construct", "spectrum", "check-ec", "mixing", "trend", "find-q1", "report"]
EcMethod = Literal["exhaustive", "sufficient_condition"]
ReportFormat = Literal["json", "text"]


class GraphParams(BaseModel):
    """The pair (q, e) defining G_{q^e} on Z_n, n = q^e."""

    model_config = ConfigDict(frozen=True)

    q: int
    e: int = 1

    @model_validator(mode="after")
    def _check(self) -> "GraphParams":
        from ..core.number_theory import is_prime

        if self.q < 2 or not is_prime(self.q):
            raise ValueError(f"q must be prime, got q={self.q}")
        if self.q % 4 != 1:
            raise ValueError(f"q must satisfy q ≡ 1 (mod 4), got q={self.q} ≡ {self.q % 4}")
        if self.e < 1:
            raise ValueError(f"e must be a positive integer, got e={self.e}")
        if self.e % 2 == 0:
            raise ValueError(f"e must be odd, got e={self.e}")
        return self

    @computed_field  # type: ignore[misc]
    @property
    def n(self) -> int:
        return self.q**self.e

    @computed_field  # type: ignore[misc]
    @property
    def degree(self) -> int:
        return (self.q**self.e - self.q ** (self.e - 1)) // 2

    @property
    def d(self) -> int:
        return self.degree

    def label(self) -> str:
        return f"G_{self.q}^{self.e}" if self.e > 1 else f"G_{self.q}"


class Counterexample(BaseModel):
    A: List[int]
    B: List[int]


class EcCertificate(BaseModel):
    t: int
    verified: bool
    method: EcMethod
    counterexample: Optional[Counterexample] = None
    witness_count_min: Optional[int] = None
    residue_distinct: bool = False
    subsets_scanned: int = 0

    @model_validator(mode="after")
    def _check(self) -> "EcCertificate":
        if self.counterexample is not None and (self.verified or self.method != "exhaustive"):
            raise ValueError("a counterexample belongs only to a refuted exhaustive certificate")
        if self.method == "exhaustive" and not self.verified and self.counterexample is None:
            raise ValueError("a refuted exhaustive certificate must carry its counterexample")
        return self


class CharSumReport(BaseModel):
    A: Tuple[int, ...]
    B: Tuple[int, ...]
    f_value: int
    g_value: int
    h_value: int
    z_forbidden_size: int
    g_lower_bound: float
    residue_distinct: bool

    @property
    def t(self) -> int:
        return len(self.A) + len(self.B)


class WeilCheck(BaseModel):
    points: Tuple[int, ...]
    sum: int
    bound: float
    ok: bool
    reduced_sum: int
    reduced_distinct: bool
    reduction_ok: bool


class ExactEigenvalue(BaseModel):
    """An eigenvalue (a_coeff + b_coeff·√radicand)/2 with its multiplicity."""

    model_config = ConfigDict(frozen=True)

    a_coeff: int
    b_coeff: int
    radicand: int
    multiplicity: Optional[int] = None

    @property
    def value(self) -> float:
        return (self.a_coeff + self.b_coeff * math.sqrt(self.radicand)) / 2


class SpectrumReport(BaseModel):
    params: GraphParams
    eigenvalues: List[ExactEigenvalue]  # descending by value
    lambda_: float = Field(serialization_alias="lambda")

    @property
    def degree(self) -> float:
        return self.eigenvalues[0].value

    @property
    def lambda2(self) -> ExactEigenvalue:
        return self.eigenvalues[1]

    @property
    def smallest(self) -> ExactEigenvalue:
        return self.eigenvalues[-1]

    def values(self) -> List[float]:
        """The full multiset, descending."""
        out: List[float] = []
        for ev in self.eigenvalues:
            out.extend([ev.value] * int(ev.multiplicity or 0))
        return out


class MixingSample(BaseModel):
    U: Tuple[int, ...]
    W: Tuple[int, ...]
    e_uw: int
    expected: float
    deviation: float
    normalized: float


class MixingScanReport(BaseModel):
    samples: int
    seed: int
    lambda_: float = Field(serialization_alias="lambda")
    max_normalized: float
    worst: Optional[MixingSample] = None
    violations: int = 0
    kept: List[MixingSample] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


class TrendRow(BaseModel):
    params: GraphParams
    degree: int
    lambda_: float = Field(serialization_alias="lambda")
    ratio: float
    edge_probability: float
    edge_probability_exact: bool


class FamilyTrendReport(BaseModel):
    e: int
    epsilon: float
    instances: List[TrendRow]
    increasing: bool
    bounded: bool
    edge_probability_ok: bool


class QuasiRandomStats(BaseModel):
    edge_count: int
    lambda1_over_pn: float
    lambda2_over_n: float


class QuasiRandomTrend(BaseModel):
    instances: List[Tuple[GraphParams, float]]
    decreasing: bool


class RunConfig(BaseModel):
    command: Command
    q: Optional[int] = None
    e: int = 1
    t: Optional[int] = None
    qs: List[int] = Field(default_factory=list)
    samples: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    budget: int = Field(default=10**12, ge=1)
    force: bool = False
    residue_distinct: bool = False
    threads: Optional[int] = None
    output_path: Optional[str] = None
    edges_path: Optional[str] = None
    format: ReportFormat = "json"


class CheckRecord(BaseModel):
    name: str
    ok: bool
    detail: str = ""


class RunReport(BaseModel):
    params: Optional[Dict[str, int]] = None
    command: Command
    seed: int
    result: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckRecord] = Field(default_factory=list)
    exit_code: int = Field(default=0, exclude=True)
