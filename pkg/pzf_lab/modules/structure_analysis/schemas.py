from __future__ import annotations

from typing import Dict, List, Tuple

from pydantic import BaseModel, Field


class Split(BaseModel):
    """Two vertex sides with no edge between them; ``s_set`` is the smaller side."""

    value: int = Field(ge=0)
    s_set: List[int] = Field(default_factory=list)
    t_set: List[int] = Field(default_factory=list)


class OneCornerstone(BaseModel):
    vertex: int
    g_value: int


class TwoCornerstone(BaseModel):
    pair: Tuple[int, int]
    g_value: int


class CornerstoneReport(BaseModel):
    one_cornerstones: List[OneCornerstone] = Field(default_factory=list)
    two_cornerstones: List[TwoCornerstone] = Field(default_factory=list)
    chosen: List[int]
    value: int
    s_set: List[int] = Field(default_factory=list)
    t_set: List[int] = Field(default_factory=list)
    is_cornerstone: bool = False

    @property
    def is_pair(self) -> bool:
        return len(self.chosen) == 2


class BoundaryProfile(BaseModel):
    active_blue: List[int]
    frontier: List[int]
    white_degree: Dict[int, int]
