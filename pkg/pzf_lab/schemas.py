from __future__ import annotations

from pathlib import Path
from typing import Any, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from pzf_lab.config import DEFAULT_SEED

Subcommand = Literal[
    "generate",
    "exact",
    "estimate",
    "tail",
    "throttle",
    "cornerstones",
    "modified",
    "bounds",
    "couple-check",
    "sweep",
    "star-tails",
]

# Subcommands that do not read a graph.
GRAPHLESS = {"sweep", "star-tails"}


def _parse_vertices(value: Any) -> Optional[List[int]]:
    if value is None or isinstance(value, list):
        return value
    text = str(value).strip()
    if text in {"", "best"}:
        return None
    try:
        vertices = [int(token) for token in text.strip("{}").split(",") if token.strip()]
    except ValueError as exc:
        raise ValueError(f"expected a vertex, a comma list or 'best', got '{text}'") from exc
    if not vertices:
        raise ValueError("vertex list is empty")
    if any(v < 0 for v in vertices):
        raise ValueError(f"vertices must be nonnegative, got '{text}'")
    return sorted(set(vertices))


class Command(BaseModel):
    subcommand: Subcommand
    graph: Optional[str] = None
    file: Optional[Path] = None
    # None means "best": the argmin over singleton starts.
    start: Optional[List[int]] = None
    superset: Optional[List[int]] = None
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    trials: Optional[int] = Field(default=None, ge=1)
    steps: Optional[int] = Field(default=None, ge=0)
    format: Optional[Literal["json", "csv"]] = None
    out: Optional[Path] = None
    cap_override: Optional[int] = Field(default=None, ge=1)
    grid: Optional[str] = None
    mode: Literal["exact", "mc"] = "exact"
    n_max: int = Field(default=300, ge=3)
    strict: bool = False
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("start", "superset", mode="before")
    @classmethod
    def _vertices(cls, value: Any) -> Optional[List[int]]:
        return _parse_vertices(value)

    @model_validator(mode="after")
    def _check_sources(self) -> "Command":
        if self.subcommand in GRAPHLESS:
            if self.subcommand == "sweep" and not self.grid:
                raise ValueError("sweep requires --grid")
            return self
        if (self.graph is None) == (self.file is None):
            raise ValueError("exactly one of --graph or --file is required")
        if self.subcommand == "tail" and self.steps is None:
            raise ValueError("tail requires --steps")
        if self.subcommand == "couple-check" and (self.start is None or self.superset is None):
            raise ValueError("couple-check requires --start and --superset")
        return self

    def params(self) -> dict:
        return self.model_dump(
            mode="json",
            exclude={"subcommand", "seed", "out", "format"},
            exclude_none=True,
        )


class CommandResult(BaseModel):
    exit_code: int = 0
    text: str = ""
    payload: Optional[dict] = None
