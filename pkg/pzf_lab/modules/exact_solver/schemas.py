from __future__ import annotations

from typing import Any, Dict, Iterable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pzf_lab.core.errors import PreconditionError
from pzf_lab.core.types import ColorState


class ReachProbability(BaseModel):
    t: int = Field(ge=0)
    value: float = Field(ge=0.0, le=1.0)


class ThrottlingResult(BaseModel):
    value: float
    argmin: ColorState


class ExactTable(BaseModel):
    """Expected remaining propagation time for every solved blue set.

    ``values`` is indexed by bitset; unsolved entries (the empty set, or sets
    outside a restricted start's upward closure) hold NaN.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(ge=1)
    graph_hash: str
    values: np.ndarray
    target_bits: int
    start_bits: Optional[int] = None

    def ept(self, state: ColorState) -> float:
        if state.n != self.n:
            raise PreconditionError(f"State width {state.n} does not match table order {self.n}")
        value = float(self.values[state.bits])
        if np.isnan(value):
            raise PreconditionError(f"Blue set {state.label()} is not covered by this table")
        return value

    def solved_bits(self) -> np.ndarray:
        return np.flatnonzero(~np.isnan(self.values))

    def to_payload(self, sets: Optional[Iterable[ColorState]] = None) -> Dict[str, Any]:
        if sets is None:
            chosen = [ColorState(n=self.n, bits=int(bits)) for bits in self.solved_bits()]
        else:
            chosen = list(sets)
        return {
            "n": self.n,
            "graph_hash": self.graph_hash,
            "entries": [
                {"blue": state.to_hex(), "ept": self.ept(state)} for state in chosen
            ],
        }
