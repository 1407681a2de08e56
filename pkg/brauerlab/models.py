from __future__ import annotations

import enum
from typing import Literal, Optional, Union

import galois
from pydantic import BaseModel, Field, field_validator, model_validator

from .basefield import ALGEBRAICALLY_CLOSED, BaseFieldDesc, parse_base
from .laurent import FieldTower, PrecisionWindow


class OutputFormat(str, enum.Enum):
    TEXT = "text"
    STRUCTURED = "structured"


class Provenance(str, enum.Enum):
    COMPUTED = "computed"
    FORMULA = "formula"
    BOUND = "bound"
    CITED = "cited"


# Run configuration
class RunConfig(BaseModel):
    base: str = "F2"
    p: int = 2
    n: int = 3
    window_lo: int = -2
    window_hi: int = 2
    budget: int = 100_000
    output_format: OutputFormat = OutputFormat.TEXT

    @field_validator("p")
    @classmethod
    def _prime(cls, v: int) -> int:
        if v < 2 or not galois.is_prime(v):
            raise ValueError(f"p must be prime, got {v}")
        return v

    @field_validator("n")
    @classmethod
    def _nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"n must be >= 0, got {v}")
        return v

    @field_validator("budget")
    @classmethod
    def _budget(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"budget must be >= 1, got {v}")
        return v

    @field_validator("base")
    @classmethod
    def _descriptor(cls, v: str) -> str:
        parse_base(v)
        return v

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if self.window_lo > self.window_hi:
            raise ValueError(f"window {self.window_lo}..{self.window_hi} is empty")
        base = parse_base(self.base)
        if base != ALGEBRAICALLY_CLOSED and base.p != self.p:
            raise ValueError(f"base field {self.base} has characteristic {base.p}, not {self.p}")
        return self

    @property
    def window_text(self) -> str:
        return f"{self.window_lo}..{self.window_hi}"

    def base_field(self) -> Union[BaseFieldDesc, str]:
        return parse_base(self.base)

    def concrete_base(self) -> BaseFieldDesc:
        """The base field to compute over; an algebraically closed base is stood in for by F_p."""
        base = self.base_field()
        if base == ALGEBRAICALLY_CLOSED:
            return BaseFieldDesc.prime(self.p)
        return base

    def tower(self, n: Optional[int] = None) -> FieldTower:
        return FieldTower(self.concrete_base(), self.n if n is None else n)

    def window(self, n: Optional[int] = None) -> PrecisionWindow:
        return PrecisionWindow.uniform(self.n if n is None else n, self.window_lo, self.window_hi)


# Report records
class Claim(BaseModel):
    name: str
    value: Union[bool, int, str]
    provenance: Provenance


class VerdictRecord(BaseModel):
    subject: str
    status: str
    reason: str = ""
    witness: Optional[str] = None
    trace: list[str] = Field(default_factory=list)


class Report(BaseModel):
    command: str
    inputs: dict[str, str] = Field(default_factory=dict)
    verdicts: list[VerdictRecord] = Field(default_factory=list)
    claims: list[Claim] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    passed: bool = True
    duration_s: float = 0.0

    def claim(self, name: str, value: Union[bool, int, str, float], provenance: Provenance) -> None:
        if isinstance(value, float):
            value = "infinite" if value == float("inf") else str(value)
        self.claims.append(Claim(name=name, value=value, provenance=provenance))

    def fail(self, note: str) -> None:
        self.passed = False
        self.notes.append(note)


class ItemResult(BaseModel):
    name: str
    status: Literal["pass", "fail", "skip"]
    detail: str = ""
    duration_s: float = 0.0
    report: Optional[Report] = None


class ReportBundle(BaseModel):
    command: str = "report-all"
    config: RunConfig
    items: list[ItemResult] = Field(default_factory=list)
    passed: bool = True
    duration_s: float = 0.0
