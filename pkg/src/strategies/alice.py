"""
Alice's strategies: how she discloses, updates and samples her guess.

Strategies are stateless; the guess itself travels in the game state, so a strategy is
deterministic given the transcript and the seed.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..engines import DensePmf, Witness
from ..engines.mirror import GibbsGuess, exact_pmf, initial_guess, update
from ..engines.sampler import default_trial_cap, rejection_sample_batch

logger = logging.getLogger(__name__)


class AliceStrategy(ABC):
    name: str = "alice"

    @abstractmethod
    def open(self, width: int, eps: float) -> Any:
        """Opening guess."""

    @abstractmethod
    def update(self, guess: Any, witness: Witness) -> Any:
        """Guess after absorbing an accepted witness."""

    @abstractmethod
    def sample(
        self, guess: Any, count: int, rng: np.random.Generator, trial_cap_factor: float
    ) -> Tuple[np.ndarray, np.ndarray]:
        """``count`` samples and the trials each one cost."""

    @abstractmethod
    def pmf(self, guess: Any) -> DensePmf:
        """Exact pmf of a guess (desk-scale diagnostics only)."""

    @abstractmethod
    def describe(self, guess: Any) -> Dict[str, Any]:
        """Transcript form of a guess."""


class MirrorDescentAlice(AliceStrategy):
    """Gibbs guesses ``mu_t ~ exp(-(eps/4) sum f_i)`` sampled by rejection."""

    name = "mirror-descent"

    def open(self, width: int, eps: float) -> GibbsGuess:
        return initial_guess(width, eps)

    def update(self, guess: GibbsGuess, witness: Witness) -> GibbsGuess:
        return update(guess, witness)

    def sample(self, guess: GibbsGuess, count: int, rng: np.random.Generator, trial_cap_factor: float):
        return rejection_sample_batch(guess, count, rng, default_trial_cap(guess, trial_cap_factor))

    def pmf(self, guess: GibbsGuess) -> DensePmf:
        return exact_pmf(guess)[0]

    def describe(self, guess: GibbsGuess) -> Dict[str, Any]:
        # the witnesses themselves are in the earlier round records
        return {"kind": "gibbs", "eps": guess.eps, "t": guess.t}


class StaticAlice(AliceStrategy):
    """Never updates: always discloses the same pmf (uniform unless given one)."""

    name = "static"

    def __init__(self, pmf: Optional[DensePmf] = None, label: str = "uniform"):
        self.fixed = pmf
        self.label = label

    def open(self, width: int, eps: float) -> DensePmf:
        return DensePmf.uniform(width) if self.fixed is None else self.fixed

    def update(self, guess: DensePmf, witness: Witness) -> DensePmf:
        return guess

    def sample(self, guess: DensePmf, count: int, rng: np.random.Generator, trial_cap_factor: float):
        return guess.sample(count, rng), np.ones(count, dtype=np.int64)

    def pmf(self, guess: DensePmf) -> DensePmf:
        return guess

    def describe(self, guess: DensePmf) -> Dict[str, Any]:
        return {"kind": "static", "label": self.label}
