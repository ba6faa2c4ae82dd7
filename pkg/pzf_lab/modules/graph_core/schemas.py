from __future__ import annotations

from typing import Dict, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from pzf_lab.core.errors import InvalidParameterError

GraphFamily = Literal["path", "cycle", "star", "complete", "spider", "star_chain", "gnp"]

# Parameter order used for positional values, e.g. "spider:3,4" -> legs=3, length=4.
FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
    "path": ("n",),
    "cycle": ("n",),
    "complete": ("n",),
    "star": ("leaves",),
    "spider": ("legs", "length"),
    "star_chain": ("r", "s"),
    "gnp": ("n", "p", "seed"),
}

PARAM_ALIASES = {"L": "leaves", "l": "legs", "m": "length"}


class GraphFamilySpec(BaseModel):
    family: GraphFamily
    n: Optional[int] = Field(default=None, ge=1)
    leaves: Optional[int] = Field(default=None, ge=1)
    legs: Optional[int] = Field(default=None, ge=1)
    length: Optional[int] = Field(default=None, ge=1)
    r: Optional[int] = Field(default=None, ge=1)
    s: Optional[int] = Field(default=None, ge=1)
    p: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    seed: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_required(self) -> "GraphFamilySpec":
        for name in FAMILY_PARAMS[self.family]:
            if name == "seed":
                continue
            if getattr(self, name) is None:
                raise ValueError(f"{self.family} requires parameter '{name}'")
        if self.family == "cycle" and self.n is not None and self.n < 3:
            raise ValueError("cycle requires n >= 3")
        return self

    @classmethod
    def parse(cls, text: str) -> "GraphFamilySpec":
        """Parse "path:5", "star_chain:r=2,s=10" or "gnp:n=50,p=0.1,seed=7"."""
        family, _, body = text.strip().partition(":")
        family = family.strip()
        if family not in FAMILY_PARAMS:
            raise InvalidParameterError(
                f"Unknown graph family '{family}' (known: {', '.join(sorted(FAMILY_PARAMS))})"
            )
        names = FAMILY_PARAMS[family]
        values: Dict[str, str] = {}
        tokens = [token.strip() for token in body.split(",") if token.strip()]
        for position, token in enumerate(tokens):
            if "=" in token:
                key, _, value = token.partition("=")
                key = PARAM_ALIASES.get(key.strip(), key.strip())
            else:
                if position >= len(names):
                    raise InvalidParameterError(f"Too many values for {family}: {text}")
                key, value = names[position], token
            if key not in names:
                raise InvalidParameterError(f"{family} has no parameter '{key}'")
            values[key] = value.strip()
        try:
            return cls.model_validate({"family": family, **values})
        except ValueError as exc:
            raise InvalidParameterError(f"Invalid graph spec '{text}': {exc}") from exc

    def params(self) -> Dict[str, object]:
        return {
            name: getattr(self, name)
            for name in FAMILY_PARAMS[self.family]
            if getattr(self, name) is not None
        }

    def label(self) -> str:
        body = ",".join(f"{key}={value}" for key, value in self.params().items())
        return f"{self.family}:{body}"
