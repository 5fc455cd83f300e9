"""
Pydantic models for run configuration and persisted certification reports.
"""
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCHEMA_VERSION = 1


class Command(str, Enum):
    CERTIFY = "certify"
    EIGS = "eigs"
    SCAN = "scan"
    MORLEY = "morley"
    REPORT = "report"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Verdict(str, Enum):
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not_certified"


class RunConfig(BaseModel):
    """Validated command-line configuration."""

    command: Command
    n: Optional[int] = Field(default=None, ge=5, le=10)
    m: int = Field(default=250, ge=2)
    gamma0: float = Field(default=4.0, ge=1.0, le=10.0)
    eps: float = Field(default=1e-6, gt=0.0)
    output_path: Optional[Path] = None
    store: Optional[Path] = None
    format: OutputFormat = OutputFormat.TEXT
    threads: int = Field(default=1, ge=1)
    krawczyk_max_dim: int = Field(default=2500, ge=1)
    m_range: Optional[tuple[int, int, int]] = None
    a: Optional[float] = None
    b: Optional[float] = None
    budget: bool = False
    plot: Optional[Path] = None
    verbose: int = 0

    @field_validator("m_range", mode="before")
    @classmethod
    def parse_m_range(cls, value: Any) -> Any:
        """Accept ``"200..600"`` (step 50) or ``"200..600:25"``."""
        if value is None or not isinstance(value, str):
            return value
        span, _, step = value.partition(":")
        start, sep, stop = span.partition("..")
        if not sep:
            raise ValueError(f"Unknown m range {value!r}, must look like 200..600 or 200..600:50")
        return int(start), int(stop), int(step) if step else 50

    @field_validator("m_range")
    @classmethod
    def check_m_range(cls, value: Optional[tuple[int, int, int]]) -> Optional[tuple[int, int, int]]:
        if value is not None:
            start, stop, step = value
            if start < 2 or stop < start or step < 1:
                raise ValueError(f"Unknown m range {value!r}, must satisfy 2 <= start <= stop and step >= 1")
        return value

    @model_validator(mode="after")
    def check_inputs(self) -> "RunConfig":
        if self.command is Command.MORLEY:
            if self.n is None and (self.a is None or self.b is None):
                raise ValueError("morley needs either --n or both --a and --b")
        elif self.n is None:
            raise ValueError(f"{self.command.value} needs --n")
        if self.command is Command.REPORT and self.store is None:
            raise ValueError("report needs --store")
        return self

    @property
    def m_values(self) -> list[int]:
        if self.m_range is None:
            return [self.m]
        start, stop, step = self.m_range
        return list(range(start, stop + 1, step))


class IntervalRecord(BaseModel):
    lo: float
    hi: float

    @classmethod
    def from_interval(cls, x: Any) -> "IntervalRecord":
        return cls(lo=x.lo, hi=x.hi)


class EigenSummary(BaseModel):
    """A certified discrete eigenvalue with its a-priori continuous enclosure."""

    discrete: IntervalRecord
    error: float
    continuous: IntervalRecord
    method: str = "residual"
    simple: bool = False

    @classmethod
    def from_enclosure(cls, enc: Any, error: Any, continuous: Any) -> "EigenSummary":
        return cls(
            discrete=IntervalRecord.from_interval(enc.value),
            error=error.hi,
            continuous=IntervalRecord.from_interval(continuous),
            method=enc.method,
            simple=enc.simple,
        )


class HessianRow(BaseModel):
    k: int
    index: int
    mu: IntervalRecord
    error: float
    final: IntervalRecord


class BudgetRecord(BaseModel):
    entries: dict[str, IntervalRecord]


class CertificationSummary(BaseModel):
    """Persisted outcome of one certification run."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    n: int
    m: int
    dof: int
    lam1: EigenSummary
    lam2: EigenSummary
    threshold: IntervalRecord
    u1_positive: bool
    rows: list[HessianRow]
    budget: BudgetRecord
    positive_count: int
    required_positive: int
    verdict: Verdict

    @field_validator("schema_version")
    @classmethod
    def check_schema(cls, value: int) -> int:
        if value != SCHEMA_VERSION:
            raise ValueError(f"Unknown report schema {value!r}, must be {SCHEMA_VERSION}")
        return value


class ScanRow(BaseModel):
    m: int
    mu_min_lo: float
    mu_min_hi: float
    budget: float
    fem_radius: float
    status: str


class MorleyResult(BaseModel):
    a: float
    b: float
    m: int
    eps: float
    certified: bool
    bound: Optional[IntervalRecord] = None
    message: str = ""
