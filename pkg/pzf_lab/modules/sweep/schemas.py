from __future__ import annotations

from typing import Optional

from pydantic import BaseModel

SWEEP_COLUMNS = [
    "family",
    "params",
    "start",
    "trials",
    "seed",
    "mean",
    "std",
    "ci_low",
    "ci_high",
    "radius",
    "n",
    "radius_ratio",
    "linear_ratio",
    "loglog_ratio",
    "valid",
    "version",
]


class SweepRow(BaseModel):
    family: str
    params: str
    start: int
    trials: int
    seed: int
    mean: float
    std: float
    ci_low: float
    ci_high: float
    radius: int
    n: int
    radius_ratio: Optional[float] = None
    linear_ratio: Optional[float] = None
    loglog_ratio: Optional[float] = None
    valid: bool = True
    version: str
