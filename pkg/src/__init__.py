"""
Verification Arena - a simulation-and-verification toolkit for quantum sampling claims.

Alice learns a Gibbs-form guess by mirror descent, Bob refutes it with [0,1]-valued
distinguishers, and a sampling referee checks his claims. The engines underneath cover
exact small-n circuit simulation, stabilizer tableaux, XHOG scoring and noise budgets.
"""

from .main import VerificationGameGraph, run_game
from .models import GameConfig, GameTranscript, Outcome, RoundRecord, ScenarioReport, Verdict

__all__ = [
    "VerificationGameGraph",
    "run_game",
    "GameConfig",
    "GameTranscript",
    "Outcome",
    "RoundRecord",
    "ScenarioReport",
    "Verdict",
]
