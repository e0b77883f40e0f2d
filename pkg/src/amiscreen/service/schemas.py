"""Request/response models for the screening service."""

from __future__ import annotations

from typing import Union

from pydantic import BaseModel, Field

AnswerValue = Union[str, float, int]


class CatalogOption(BaseModel):
    value: str
    encoding: float
    label: str


class CatalogItemOut(BaseModel):
    code: str
    kind: str
    text: str
    options: list[CatalogOption]


class CatalogResponse(BaseModel):
    version: str
    locale: str
    items: list[CatalogItemOut]


class ScreeningRequest(BaseModel):
    answers: dict[str, AnswerValue] = Field(
        ..., description="One answer per feature code in the served catalog"
    )
    catalog_version: str | None = None
    locale: str = "en"


class ScreeningResponse(BaseModel):
    label: str  # ASD | TD
    probability: float  # probability of the returned label
    probabilities: dict[str, float]  # both classes; they sum to 1
    model_family: str
    model_version: str
    catalog_version: str
    disclaimer: str


class HealthResponse(BaseModel):
    status: str
    artifact_version: str
    catalog_version: str
    model_family: str
    uptime_seconds: float


class FieldIssue(BaseModel):
    code: str
    problem: str


class AnswerValidationError(BaseModel):
    detail: str
    issues: list[FieldIssue]
