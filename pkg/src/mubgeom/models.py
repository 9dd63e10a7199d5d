"""Pydantic request/response models for the HTTP service and the CLI client."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

BasisLabelModel = Union[int, Literal["CB"]]


class PreparationModel(BaseModel):
    kind: Literal["balanced", "line"]
    mddot: Optional[int] = None
    m0: Optional[int] = None

    @model_validator(mode="after")
    def _line_needs_coordinates(self):
        if self.kind == "line" and (self.mddot is None or self.m0 is None):
            raise ValueError("line preparation requires mddot and m0")
        return self


class VerifyRequest(BaseModel):
    ds: list[int] = Field(min_length=1)
    backend: Literal["exact", "float"] = "exact"
    tolerance: float = 1e-10


class CheckModel(BaseModel):
    name: str
    d: int
    status: Literal["pass", "fail", "skipped"]
    residual: Optional[float] = None
    detail: Optional[str] = None


class VerifyResponse(BaseModel):
    version: str
    backend: str
    tolerance: Optional[float]
    ds: list[int]
    all_passed: bool
    checks: list[CheckModel]
    resolved_conventions: dict


class GeometryRequest(BaseModel):
    d: int


class PointModel(BaseModel):
    m: int
    b: BasisLabelModel


class LineEntryModel(BaseModel):
    mddot: int
    m0: int
    points: list[PointModel]


class GeometryResponse(BaseModel):
    version: str
    d: int
    num_lines: int
    num_points: int
    lines: list[LineEntryModel]
    incidence_csv: str
    axioms: dict
    annotated_example: Optional[dict] = None


class OracleRequest(BaseModel):
    d: int
    preparation: PreparationModel
    bases: Optional[list[BasisLabelModel]] = None
    unrotate: bool = False


class OracleEntryModel(BaseModel):
    m: int
    mddot: int
    m0: int
    probability: str  # exact rational rendered as "a/d^k"


class OracleTableModel(BaseModel):
    basis: BasisLabelModel
    entries: list[OracleEntryModel]
    king_marginal: dict
    sum_valid: bool


class OracleResponse(BaseModel):
    version: str
    d: int
    preparation: PreparationModel
    unrotate: bool
    tables: list[OracleTableModel]
    support_law: Optional[dict] = None


class SimulateRequest(BaseModel):
    d: int
    preparation: PreparationModel
    rule: Literal["line_rule", "label_difference"] = "line_rule"
    trials: int = Field(default=10000, ge=1)
    seed: Optional[int] = None
    workers: int = Field(default=1, ge=1)
    unrotate: bool = False
    include_transcripts: bool = True


class SimulateResponse(BaseModel):
    version: str
    summary: dict
    transcripts: list[dict]
    resolved_conventions: dict


class EvaluateRequest(BaseModel):
    d: int
    preparation: PreparationModel
    rule: Literal["line_rule", "label_difference"] = "line_rule"
    unrotate: bool = False


class EvaluateResponse(BaseModel):
    version: str
    report: dict


class ConformanceRequest(BaseModel):
    ds: list[int] = Field(min_length=1)


class ConformanceResponse(BaseModel):
    version: str
    report: dict


class FindingsRequest(BaseModel):
    ds: list[int] = Field(min_length=1)


class FindingsResponse(BaseModel):
    version: str
    report: dict
