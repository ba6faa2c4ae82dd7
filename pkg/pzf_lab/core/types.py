from __future__ import annotations

from typing import Any, Dict, Iterable, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from pzf_lab.core.errors import InvalidStartError
from pzf_lab.core.utils import (
    bits_from_vertices,
    bits_to_mask,
    mask_to_bits,
    vertices_from_bits,
)


class ColorState(BaseModel):
    """Blue-vertex set of an ``n``-vertex graph stored as an integer bitset."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    bits: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_width(self) -> "ColorState":
        if self.bits >> self.n:
            raise InvalidStartError(
                f"Bitset {hex(self.bits)} has vertices beyond n-1 = {self.n - 1}"
            )
        return self

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "ColorState":
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= int(v) < n:
                raise InvalidStartError(f"Vertex {v} out of range 0..{n - 1}")
        return cls(n=n, bits=bits_from_vertices(vertices))

    @classmethod
    def full(cls, n: int) -> "ColorState":
        return cls(n=n, bits=(1 << n) - 1)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "ColorState":
        return cls(n=int(mask.shape[0]), bits=mask_to_bits(mask))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "ColorState":
        return cls(n=n, bits=int(text, 16))

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.n) - 1

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    def vertices(self) -> List[int]:
        return vertices_from_bits(self.bits)

    def contains(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def issubset(self, other: "ColorState") -> bool:
        return self.bits & ~other.bits == 0

    def to_mask(self) -> np.ndarray:
        return bits_to_mask(self.bits, self.n)

    def to_hex(self) -> str:
        return hex(self.bits)

    def label(self) -> str:
        return "{" + ",".join(str(v) for v in self.vertices()) + "}"


class Trajectory(BaseModel):
    """Blue sets at t = 0, 1, ... of one seeded run."""

    seed: int
    states: List[ColorState] = Field(default_factory=list)
    terminated: bool = False

    @model_validator(mode="after")
    def _check_growth(self) -> "Trajectory":
        for prev, nxt in zip(self.states, self.states[1:]):
            if not prev.issubset(nxt):
                raise ValueError("Trajectory states must grow monotonically")
        return self

    @property
    def steps(self) -> int:
        return max(len(self.states) - 1, 0)

    @property
    def final(self) -> ColorState:
        return self.states[-1]

    def to_payload(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "steps": [state.to_hex() for state in self.states],
            "terminated": self.terminated,
        }

    @classmethod
    def from_payload(cls, n: int, payload: Dict[str, Any]) -> "Trajectory":
        return cls(
            seed=int(payload["seed"]),
            states=[ColorState.from_hex(n, item) for item in payload["steps"]],
            terminated=bool(payload["terminated"]),
        )
