"""Pydantic request/response models for the verification service.

Group expressions travel as grammar strings; `files` carries the contents
of any `@name` atoms inline so that clients resolve file references on
their side of the wire.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator


class FamilySelector(BaseModel):
    family: Optional[Literal["A"]] = None
    ell: Optional[int] = None
    preset: Optional[str] = None
    config: Optional[dict] = None
    rank: Optional[int] = None

    @field_validator("ell")
    @classmethod
    def _ell_positive(cls, v):
        if v is not None and v < 2:
            raise ValueError("ell must be a prime >= 3")
        return v


class ChartabRequest(BaseModel):
    spec: str
    files: dict[str, dict] = Field(default_factory=dict)


class ThevRequest(BaseModel):
    spec: str
    ell: int
    files: dict[str, dict] = Field(default_factory=dict)


class LittleRequest(BaseModel):
    spec: str
    normal: str
    files: dict[str, dict] = Field(default_factory=dict)


class CharsRequest(BaseModel):
    case: Literal[1, 2]
    x1: str
    e: int
    ell: int
    files: dict[str, dict] = Field(default_factory=dict)


class AwcRequest(FamilySelector):
    pass


class AmRequest(FamilySelector):
    levels: str = "1..1"


class ConnectivityRequest(FamilySelector):
    level: int = 1


class MuRequest(FamilySelector):
    level: int = 1


class SweepRequest(BaseModel):
    config: dict


class ReportResponse(BaseModel):
    passed: bool
    report: dict


class TableResponse(BaseModel):
    passed: bool
    table: dict
    report: dict


class HealthResponse(BaseModel):
    engine_version: str
    status: str = "ok"


class ErrorBody(BaseModel):
    type: str
    message: str
