"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class SimulateRequest(BaseModel):
    ideal: bool = False
    config: str | None = None
    bases: list[str] = Field(default_factory=lambda: ["ZZ", "XX"])
    include_bars: bool = False


class SimulateResponse(BaseModel):
    doc: dict
    text: str
    bars_csv: str | None = None


class AnalyzeRequest(BaseModel):
    counts: str
    resamples: int = 200
    seed: int = 0
    reference_config: str | None = None
    include_bars: bool = False


class AnalyzeResponse(BaseModel):
    doc: dict
    text: str
    bars_csv: str | None = None


class FitRequest(BaseModel):
    counts: str
    fitspec: str | None = None


class FitResponse(BaseModel):
    doc: dict
    text: str
    params_config: str


class SynthRequest(BaseModel):
    ideal: bool = False
    config: str | None = None
    bases: list[str] = Field(default_factory=lambda: ["ZZ", "XX"])
    trials: int
    accidental_mean: float = 0.0
    seed: int = 0
    integration_time: float = 1.0


class SynthResponse(BaseModel):
    counts: str
    text: str


class RenderRequest(BaseModel):
    doc: dict


class RenderResponse(BaseModel):
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str
