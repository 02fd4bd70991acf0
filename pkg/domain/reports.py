"""JSON report records written by the command line, one object per line."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, conint

Verdict = Literal["match", "sign_flipped", "mismatch"]


class ReduceReport(BaseModel):
    word: str = Field(..., description="Reduced word in word-file syntax")
    length: conint(ge=0)
    cyclically_reduced: bool


class ConjugateReport(BaseModel):
    result: Literal["found", "none"]
    conjugator: Optional[str] = None
    core: Optional[str] = None
    factor: Optional[Literal["O1", "O2", "identity"]] = None


class ApplyReport(BaseModel):
    point: str
    residual: float
    relative_residual: float
    on_surface: bool


class BracketReport(BaseModel):
    lhs: str = Field(..., description="Computed bracket as a coordinate field")
    rhs: str = Field(..., description="Closed-form right-hand side")
    equal: bool
    sign: Verdict


class FlowReport(BaseModel):
    closed_form: str
    closed_form_residual: float
    rk4: Optional[str] = None
    rk4_distance: Optional[float] = None
    steps: Optional[int] = None
    symbolic_available: bool
    symbolic: Optional[str] = Field(
        default=None, description="Time-t flow as an O1 letter when it is an exp-polynomial map"
    )
    generator_error: float


class RankReport(BaseModel):
    rank: conint(ge=0)
    expected: conint(ge=0)
    matches: bool


class BchReport(BaseModel):
    size: conint(ge=3, le=6)
    seed: int
    identity_exact: bool
    K_in_derived: bool
    series_matches: Optional[bool] = Field(
        default=None, description="Order-4 BCH series equals Z; only decided for size <= 5"
    )
    K: List[List[str]]


class DecomposeReport(BaseModel):
    factors: List[Tuple[int, str]] = Field(
        ..., description="(Malcev basis index, exact parameter) in product order"
    )
    reconstructs: bool
    bound: conint(ge=0)
    count: conint(ge=0)


class HyperbolicReport(BaseModel):
    point: str
    residual: float


class CheckReport(BaseModel):
    name: str
    cases: conint(ge=0)
    failures: conint(ge=0)
    passed: bool
    elapsed_seconds: float
    detail: str = ""


class ErrorReport(BaseModel):
    error: str
    message: str
    exit_code: int
    line: Optional[int] = None
    column: Optional[int] = None


__all__ = [
    "Verdict",
    "ReduceReport",
    "ConjugateReport",
    "ApplyReport",
    "BracketReport",
    "FlowReport",
    "RankReport",
    "BchReport",
    "DecomposeReport",
    "HyperbolicReport",
    "CheckReport",
    "ErrorReport",
]
