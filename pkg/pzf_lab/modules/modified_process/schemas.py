from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class ModifiedRunRecord(BaseModel):
    chosen: List[int]
    g_value: int
    s_set: List[int] = Field(default_factory=list)
    t_set: List[int] = Field(default_factory=list)
    phase4_steps: int = Field(default=0, ge=0)
    phase6_steps: int = Field(default=0, ge=0)
    phase7_steps: int = Field(default=0, ge=0)
    # Completion step of each side in phase 7; the phase length is their max.
    phase7_t_steps: int = Field(default=0, ge=0)
    phase7_s_steps: int = Field(default=0, ge=0)
    total_steps: int = Field(default=0, ge=0)
    stalled: bool = False
    stall_phase: Optional[int] = None
    diagnostic: Optional[str] = None
    seed: int

    @model_validator(mode="after")
    def _check_totals(self) -> "ModifiedRunRecord":
        if self.stalled and not self.diagnostic:
            raise ValueError("A stalled run must carry a diagnostic")
        if not self.stalled and self.total_steps != (
            self.phase4_steps + self.phase6_steps + self.phase7_steps
        ):
            raise ValueError("total_steps must equal the sum of phase steps")
        return self


class PhaseStat(BaseModel):
    mean: float
    std_error: float


class CorpusSummary(BaseModel):
    runs: int = Field(ge=1)
    seed: int
    chosen: List[int]
    s_size: int
    t_size: int
    stalled_runs: int = 0
    phase4: PhaseStat
    phase6: PhaseStat
    phase7: PhaseStat
    total: PhaseStat


class SupermartingaleTrace(BaseModel):
    """Per-step batch means of C^(min(t, tau) - X) for the phase-7 rule."""

    constant: float
    runs: int
    means: List[float]
    std_errors: List[float]
