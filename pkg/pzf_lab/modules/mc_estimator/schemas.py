from __future__ import annotations

from typing import List

from pydantic import BaseModel, Field, model_validator


class EstimateResult(BaseModel):
    mean: float
    std_dev: float = Field(ge=0.0)
    trials: int = Field(ge=1)
    ci_low: float
    ci_high: float
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0)
    seed: int
    max_steps: int
    truncated: int = Field(default=0, ge=0)
    valid: bool = True

    @model_validator(mode="after")
    def _check_interval(self) -> "EstimateResult":
        if not self.ci_low <= self.mean <= self.ci_high:
            raise ValueError("Confidence interval must contain the mean")
        return self

    @property
    def standard_error(self) -> float:
        return self.std_dev / self.trials**0.5


class TailEstimate(BaseModel):
    """Fraction of trials still running after ``t`` steps, with a Wilson interval."""

    t: int = Field(ge=0)
    value: float = Field(ge=0.0, le=1.0)
    ci_low: float = Field(ge=0.0, le=1.0)
    ci_high: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    confidence: float = 0.95
    seed: int


class GraphEstimate(BaseModel):
    result: EstimateResult
    vertex: int = Field(ge=0)
    candidates: List[int]
    restricted: bool = False
