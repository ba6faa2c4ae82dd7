from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

BoundMode = Literal["exact", "monte_carlo"]
BoundDirection = Literal["upper", "lower", "equal"]


class BoundEntry(BaseModel):
    name: str
    bound_value: float
    observed_value: float
    satisfied: bool
    mode: BoundMode
    direction: BoundDirection
    tolerance: float = Field(ge=0.0)


class BoundReport(BaseModel):
    graph_id: str
    n: int
    start: str
    mode: BoundMode
    observed: float
    standard_error: Optional[float] = None
    entries: List[BoundEntry] = Field(default_factory=list)
    # Informational values with no pass/fail, e.g. ept / (r * ln(n / r)).
    diagnostics: Dict[str, Optional[float]] = Field(default_factory=dict)

    @property
    def all_satisfied(self) -> bool:
        return all(entry.satisfied for entry in self.entries)
