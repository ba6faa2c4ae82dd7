from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

DEFAULT_SEED = 0x5EED
MAX_STEPS_FACTOR = 64


class EngineConfig(BaseModel):
    # max_steps defaults to max_steps_factor * n, far above ept <= n - 1.
    max_steps_factor: int = Field(default=MAX_STEPS_FACTOR, ge=1, le=4096)


class SolverConfig(BaseModel):
    default_cap: int = Field(default=16, ge=1, le=22)
    hard_cap: int = Field(default=22, ge=1, le=22)
    frontier_cap: int = Field(default=22, ge=1, le=22)
    tolerance: float = Field(default=1e-9, gt=0.0, le=1e-3)


class EstimatorConfig(BaseModel):
    default_trials: int = Field(default=10_000, ge=1, le=10_000_000)
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0)
    workers: int = Field(default=1, ge=1, le=256)
    candidate_threshold: int = Field(default=64, ge=1)
    candidate_sample: int = Field(default=8, ge=0)
    se_multiplier: float = Field(default=4.0, gt=0.0)


class GeneratorConfig(BaseModel):
    gnp_retries: int = Field(default=100, ge=1, le=10_000)


class CliConfig(BaseModel):
    default_seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    default_format: Literal["json", "csv"] = "json"
    output_root: Path = Path("output")


class AppConfig(BaseModel):
    config_file: Path = Path("config/settings.yaml")
    engine: EngineConfig = Field(default_factory=EngineConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    estimator: EstimatorConfig = Field(default_factory=EstimatorConfig)
    generators: GeneratorConfig = Field(default_factory=GeneratorConfig)
    cli: CliConfig = Field(default_factory=CliConfig)

    def resolve_out(self, out: Path) -> Path:
        """Relative --out paths land under cli.output_root."""
        out = Path(out)
        return out if out.is_absolute() else self.cli.output_root / out

    def normalized(self) -> "AppConfig":
        payload = self.model_dump(mode="python")
        payload["config_file"] = Path(payload["config_file"])
        payload["cli"]["output_root"] = Path(payload["cli"]["output_root"])
        # A default cap above the hard cap would be silently unusable.
        if payload["solver"]["default_cap"] > payload["solver"]["hard_cap"]:
            payload["solver"]["default_cap"] = payload["solver"]["hard_cap"]
        return AppConfig.model_validate(payload)

    def max_steps_for(self, n: int) -> int:
        return self.engine.max_steps_factor * max(n, 1)


def default_app_config() -> AppConfig:
    return AppConfig()
