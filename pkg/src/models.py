"""Pydantic models for game configuration, round records, transcripts and scenario reports."""

import hashlib
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

SCHEMA_VERSION = 1


class Verdict(str, Enum):
    BOB_REFUTED_ALICE = "bob-refuted-alice"
    BOB_CONCEDED = "bob-conceded"
    ALICE_BUDGET_EXCEEDED = "alice-budget-exceeded"


class Outcome(str, Enum):
    ALICE_WINS = "alice-wins"
    BOB_WINS = "bob-wins"
    ROUND_CAP_REACHED = "round-cap-reached"


class GameConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    eps: float = Field(..., gt=0.0, le=1.0)
    delta: float = Field(0.1, gt=0.0, le=1.0 / 3.0)
    round_cap: Optional[int] = Field(None, ge=1)
    sample_schedule_constant: float = Field(2.0, gt=0.0)
    alice_trial_cap_factor: float = Field(20.0, ge=1.0)
    recheck_history: bool = True
    referee_mode: Literal["sampled", "exact"] = "sampled"
    track_exact: bool = True
    embed_samples: bool = False


def sample_hash(indices: np.ndarray) -> str:
    """sha256 of the int64 little-endian sample indices."""
    return hashlib.sha256(np.asarray(indices, dtype="<i8").tobytes()).hexdigest()


class RoundRecord(BaseModel):
    t: int
    alice_guess: Dict[str, Any]
    bob_witness: Optional[Dict[str, Any]] = None
    claimed_gap: Optional[float] = None
    referee_samples_per_side: int = 0
    empirical_gaps: List[float] = []
    accepted: List[bool] = []
    verdict: Verdict
    alice_trials: int = 0
    bob_sample_hash: Optional[str] = None
    alice_sample_hash: Optional[str] = None
    bob_samples: Optional[List[int]] = None
    alice_samples: Optional[List[int]] = None
    exact_gap: Optional[float] = None
    exact_divergence: Optional[float] = None
    exact_tv: Optional[float] = None
    note: Optional[str] = None


class GameTranscript(BaseModel):
    schema_version: int = SCHEMA_VERSION
    config: GameConfig
    seed: int
    width: int
    target_label: str
    alice: str
    bob: str
    rounds: List[RoundRecord] = []
    outcome: Outcome
    updates: int = 0
    round_cap: int
    round_bound: int
    initial_divergence: float
    final_tv: float
    final_divergence: float
    errors: List[str] = []

    @field_validator("rounds")
    @classmethod
    def rounds_are_numbered(cls, rounds: List[RoundRecord]) -> List[RoundRecord]:
        if [r.t for r in rounds] != list(range(1, len(rounds) + 1)):
            raise ValueError("rounds must be numbered 1..T in order")
        return rounds

    def metrics_frame(self) -> pd.DataFrame:
        """Per-round summary (round, gap, divergence, TV) for plotting."""
        return pd.DataFrame(
            [
                {
                    "round": r.t,
                    "verdict": r.verdict.value,
                    "claimed_gap": r.claimed_gap,
                    "empirical_gap": r.empirical_gaps[0] if r.empirical_gaps else None,
                    "exact_gap": r.exact_gap,
                    "divergence": r.exact_divergence,
                    "tv": r.exact_tv,
                    "samples_per_side": r.referee_samples_per_side,
                    "alice_trials": r.alice_trials,
                }
                for r in self.rounds
            ],
            columns=[
                "round",
                "verdict",
                "claimed_gap",
                "empirical_gap",
                "exact_gap",
                "divergence",
                "tv",
                "samples_per_side",
                "alice_trials",
            ],
        )


class ScenarioReport(BaseModel):
    """Common envelope for every scenario's JSON output."""

    schema_version: int = SCHEMA_VERSION
    scenario: str
    seed: int
    parameters: Dict[str, Any] = {}
    results: Dict[str, Any] = {}
    artifacts: List[str] = []
