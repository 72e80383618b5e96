"""Pydantic schemas for candidates, code records, search and verification results."""

from enum import Enum
from fractions import Fraction
from math import gcd
from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Largest supported lifting degree; keeps every product of two residues inside int64
MAX_MODULUS = 2**31 - 1

SUPPORTED_GIRTHS = (6, 8, 10, 12)


class IrsType(str, Enum):
    """Structure of the second exponent-matrix column."""

    TYPE_I = "I"
    TYPE_II = "II"


class IrsCandidate(BaseModel):
    """A lifting degree N with an admissible generator a."""

    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=2, le=MAX_MODULUS, description="Lifting degree (circulant size)")
    a: int = Field(..., ge=0, description="Generator of the cyclic subgroup, reduced mod N")
    irs_type: IrsType = Field(..., description="Type-I (order m-1) or type-II (a(1-a) = 1)")
    m: int = Field(..., ge=3, description="Number of exponent-matrix rows served")

    @model_validator(mode="after")
    def _check_generator(self) -> "IrsCandidate":
        N, a, m = self.N, self.a, self.m
        if a >= N:
            raise ValueError(f"a={a} is not reduced modulo N={N}")
        if gcd(a, N) != 1:
            raise ValueError(f"a={a} is not a unit modulo N={N}")
        if self.irs_type == IrsType.TYPE_II:
            if m != 3:
                raise ValueError(f"type-II candidates serve m=3 only, got m={m}")
            if N <= 3:
                raise ValueError(f"type-II candidates need N > 3, got N={N}")
            if (a * (1 - a)) % N != 1:
                raise ValueError(f"a={a} does not satisfy a(1-a) = 1 mod {N}")
        else:
            # zring imports this module
            from src.tools.zring import multiplicative_order, pow_mod

            if pow_mod(a, m - 1, N) != 1 or multiplicative_order(a, N) != m - 1:
                raise ValueError(f"a={a} does not have multiplicative order {m - 1} modulo {N}")
        return self

    def base_column(self) -> List[int]:
        """P1 = (0, 1, a, ..., a^(m-2)) mod N."""
        column, power = [0], 1
        for _ in range(1, self.m):
            column.append(power)
            power = (power * self.a) % self.N
        return column


class IrsMatrixSpec(BaseModel):
    """An IRS candidate plus its column multipliers (0, 1, g2, ..., g_{n-1})."""

    candidate: IrsCandidate
    gammas: List[int] = Field(..., min_length=1, description="Column multipliers, gamma_0 = 0")

    @model_validator(mode="after")
    def _check_gammas(self) -> "IrsMatrixSpec":
        gammas, N = self.gammas, self.candidate.N
        if gammas[0] != 0:
            raise ValueError("gamma_0 must be 0")
        if len(gammas) > 1 and gammas[1] != 1:
            raise ValueError("gamma_1 must be 1")
        if any(not 0 <= g < N for g in gammas):
            raise ValueError(f"multipliers must be reduced modulo N={N}")
        if len(set(gammas)) != len(gammas):
            raise ValueError("multipliers must be distinct")
        return self

    def canonical(self) -> "IrsMatrixSpec":
        """Same code with multipliers in ascending order."""
        return IrsMatrixSpec(candidate=self.candidate, gammas=sorted(self.gammas))


class CodeRecord(BaseModel):
    """One verifiable code: {N, P^{a,type}_{m x n}, [0, 1, ...]} at girth g."""

    model_config = ConfigDict(populate_by_name=True)

    N: int = Field(..., ge=2, le=MAX_MODULUS)
    a: int = Field(..., ge=0)
    irs_type: IrsType = Field(..., alias="type")
    m: int = Field(..., ge=3)
    n: int = Field(..., ge=2)
    g: int = Field(..., description="Guaranteed girth")
    gamma: List[int]

    @field_validator("g")
    @classmethod
    def _check_girth(cls, value: int) -> int:
        if value not in SUPPORTED_GIRTHS:
            raise ValueError(f"girth must be one of {SUPPORTED_GIRTHS}, got {value}")
        return value

    @model_validator(mode="after")
    def _check_gamma(self) -> "CodeRecord":
        if len(self.gamma) != self.n:
            raise ValueError(f"expected {self.n} multipliers, got {len(self.gamma)}")
        if self.gamma[:2] != [0, 1]:
            raise ValueError("multipliers must start with 0, 1")
        return self

    def candidate(self) -> IrsCandidate:
        return IrsCandidate(N=self.N, a=self.a, irs_type=self.irs_type, m=self.m)

    def matrix_spec(self) -> IrsMatrixSpec:
        return IrsMatrixSpec(candidate=self.candidate(), gammas=list(self.gamma))

    def label(self) -> str:
        """Short human label, e.g. N=37 P^{27,II}_{3x4} g=10."""
        return f"N={self.N} P^{{{self.a},{self.irs_type.value}}}_{{{self.m}x{self.n}}} g={self.g}"


class SearchConfig(BaseModel):
    """Inputs of one controlled greedy search."""

    m: int = Field(..., ge=3)
    n: int = Field(..., ge=2)
    N: int = Field(..., ge=2, le=MAX_MODULUS)
    g: int = Field(..., description="Target girth")
    G: List[int] = Field(..., description="Per-depth branch budgets, length n")
    deterministic_seedless: Literal[True] = True

    @field_validator("g")
    @classmethod
    def _check_girth(cls, value: int) -> int:
        if value not in (8, 10, 12):
            raise ValueError(f"target girth must be 8, 10 or 12, got {value}")
        return value

    @model_validator(mode="after")
    def _check_effort(self) -> "SearchConfig":
        if len(self.G) != self.n:
            raise ValueError(f"G must have length n={self.n}, got {len(self.G)}")
        if any(not 1 <= v <= self.N for v in self.G):
            raise ValueError(f"G entries must lie in [1, {self.N}]")
        return self

    @property
    def exhaustive(self) -> bool:
        return all(v == self.N for v in self.G)


SearchStatus = Literal["found", "infeasible", "not_found", "budget"]


class SearchOutcome(BaseModel):
    """Result of searching one lifting degree."""

    config: SearchConfig
    status: SearchStatus
    record: Optional[CodeRecord] = None
    candidates: List[int] = Field(default_factory=list, description="Generators tried, in order")
    nodes: int = Field(default=0, description="Search-tree nodes expanded")
    elapsed_seconds: float = 0.0


class VerificationResult(BaseModel):
    """Verdict for one corpus record."""

    record: CodeRecord
    fossorier_girth: str
    tanner_girth: Optional[str] = Field(None, description="Set when the Tanner oracle ran")
    passed: bool
    elapsed_seconds: float = 0.0


class VerificationReport(BaseModel):
    """Verdicts for a batch of records, in input order."""

    results: List[VerificationResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0


class SieveClass(str, Enum):
    """Per-N outcome of the two-column sieve."""

    NO_SUBGROUP = "no_subgroup"
    SUBGROUP_NO_GIRTH = "subgroup_no_girth"
    QUALIFIED = "qualified"


class SieveStat(BaseModel):
    """Qualified fraction of one sieve configuration over an N range."""

    label: str
    irs_type: IrsType
    m: int
    g: int
    n_from: int
    n_to: int
    qualified: int
    total: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.qualified, self.total) if self.total else Fraction(0)

    @property
    def percent(self) -> float:
        return round(100 * float(self.fraction), 1)


class GirthBounds(BaseModel):
    """Classic and corrected lower bounds on N for girth-10 fully connected codes."""

    m: int
    n: int
    classic: int
    corrected: int


class ExpectationEstimate(BaseModel):
    """Expected number of girth-g matrices, unconstrained (E0) and with the IRS structure (E1)."""

    m: int
    n: int
    g: int
    N: int
    constraints: int
    log10_e0: float
    log10_e1: float

    @property
    def e0(self) -> float:
        return _power_of_ten(self.log10_e0)

    @property
    def e1(self) -> float:
        return _power_of_ten(self.log10_e1)

    @property
    def log10_ratio(self) -> float:
        """log10(E0 / E1)."""
        return self.log10_e0 - self.log10_e1


def _power_of_ten(exponent: float) -> float:
    if exponent > 308:
        return float("inf")
    return 10.0**exponent
