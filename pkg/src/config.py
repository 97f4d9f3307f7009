"""
Scenario configuration: flat KEY=VALUE files, command-line overrides and env defaults.
"""

import logging
import os
import re
from typing import Any, Dict, List, Literal, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import UsageError

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

SCENARIOS = ("game", "xhog-spoof", "clifford", "maxcut", "entropy-survey", "noise-grid")
_LINE = re.compile(r"^\s*(export\s+)?[A-Za-z_][A-Za-z0-9_\-]*\s*=")


def default_output_dir() -> str:
    return os.getenv("ARENA_OUTPUT_DIR", os.path.join(os.getcwd(), "results"))


def default_threads() -> int:
    return int(os.getenv("ARENA_THREADS", "1"))


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: Literal["game", "xhog-spoof", "clifford", "maxcut", "entropy-survey", "noise-grid"]
    seed: int = 0
    eps: float = Field(0.3, gt=0.0, le=1.0)
    delta: float = Field(0.1, gt=0.0, le=1.0 / 3.0)

    # target
    n: int = Field(6, ge=1, le=20)
    depth: int = Field(12, ge=0)
    target: Literal["brickwork", "uniform", "point-mass", "pmf-file"] = "brickwork"
    pmf_file: Optional[str] = None

    # game
    alice: Literal["mirror-descent", "static"] = "mirror-descent"
    bob: Literal["optimal-indicator", "heavy-set"] = "optimal-indicator"
    round_cap: Optional[int] = Field(None, ge=1)
    referee_mode: Literal["sampled", "exact"] = "sampled"
    recheck_history: bool = True
    embed_samples: bool = False

    # ensembles and repetitions
    circuits: int = Field(100, ge=1)
    repetitions: int = Field(100, ge=1)

    # xhog
    k: int = Field(50, ge=1)
    b: Optional[float] = Field(None, gt=1.0)

    # maxcut
    degree: int = Field(3, ge=1)

    # noise grid and surveys
    depths: List[int] = [1, 2, 3, 4, 5]
    rates: List[float] = [0.05, 0.1, 0.2]
    deltas: List[float] = [0.1, 0.2]
    sdpi_n: int = Field(2, ge=1, le=4)
    sdpi_trials: int = Field(1000, ge=1)

    out: str = Field(default_factory=default_output_dir)
    threads: int = Field(default_factory=default_threads, ge=1)

    @field_validator("depths", "rates", "deltas", mode="before")
    @classmethod
    def split_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def check_target(self) -> "ScenarioConfig":
        if self.target == "pmf-file" and not self.pmf_file:
            raise ValueError("target=pmf-file needs pmf_file")
        if any(not 0.0 <= p <= 1.0 for p in self.rates):
            raise ValueError("noise rates must lie in [0, 1]")
        if any(not 0.0 < d < 1.0 for d in self.deltas):
            raise ValueError("deltas must lie in (0, 1)")
        return self


def _prescan(path: str) -> None:
    """Reject lines that are neither blank, comments, nor KEY=VALUE, naming the line."""
    with open(path, "r") as f:
        for lineno, line in enumerate(f, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if not _LINE.match(stripped):
                raise UsageError(f"{path}:{lineno}: expected KEY=VALUE, got {stripped!r}")


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def load_config(
    scenario: str, path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> ScenarioConfig:
    """Read a scenario file (if any), apply non-None overrides and validate."""
    values: Dict[str, Any] = {}
    if path:
        if not os.path.exists(path):
            raise UsageError(f"config file not found: {path}")
        _prescan(path)
        for key, value in dotenv_values(path).items():
            if value is None:
                raise UsageError(f"{path}: key {key!r} has no value")
            values[_normalize_key(key)] = value
    if "scenario" in values and values["scenario"] != scenario:
        raise UsageError(f"config file is for scenario {values['scenario']!r}, not {scenario!r}")
    values["scenario"] = scenario
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        config = ScenarioConfig(**values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise UsageError(f"invalid configuration: {problems}") from e

    logger.debug(f"Loaded configuration: {config.model_dump()}")
    return config
