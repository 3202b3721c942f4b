"""Request/response bodies for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

MAX_SEED = 2**64 - 1


class ExperimentRequest(BaseModel):
    """Config block for one experiment kind plus the master seed.

    The config dict is validated against the schema for the endpoint's
    experiment kind; unknown kinds and malformed blocks are rejected
    before any work runs.
    """

    config: dict = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)


class ExperimentResponse(BaseModel):
    kind: str
    config_hash: str
    columns: list[str]
    rows: list[list[str]]
    csv: str
    traces: dict[str, list[list[str]]] = Field(default_factory=dict)


class PlotRequest(BaseModel):
    csv: str
    kind: str = "line"
    x: str = ""
    y: str = ""
    value: str | None = None
    series: str | None = None
    title: str = ""


class PlotResponse(BaseModel):
    svg: str


class HealthResponse(BaseModel):
    status: str
    version: str
