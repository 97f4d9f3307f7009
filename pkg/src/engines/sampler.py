"""
Rejection samplers: Gibbs guesses without their partition function, and uniform-on-L.

Both samplers propose uniform strings and accept with a per-string probability; a trial
costs one energy (or witness) evaluation. Batches are drawn from a single proposal
stream split at acceptances, so every accepted sample keeps its own trial count.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import BudgetExceededError, ParameterError
from .distcore import BitString
from .mirror import GibbsGuess
from .witness import Witness

logger = logging.getLogger(__name__)

TRIAL_CAP_FACTOR = 20.0
PROPOSAL_CHUNK = 4096


@dataclass(frozen=True)
class SampleReport:
    sample: BitString
    trials_used: int
    acceptance_estimate: float

    def __post_init__(self):
        if self.trials_used < 1:
            raise ParameterError("trials_used must be at least 1")


def default_trial_cap(g: GibbsGuess, factor: float = TRIAL_CAP_FACTOR) -> int:
    """``ceil(factor * exp(eps t / 4))``, generous against the geometric mean trial count."""
    return math.ceil(factor * math.exp(g.eps * g.t / 4.0))


def _accept_batch(
    width: int,
    acceptance: Callable[[np.ndarray], np.ndarray],
    count: int,
    rng: np.random.Generator,
    trial_cap: int,
    what: str,
) -> Tuple[np.ndarray, np.ndarray]:
    if trial_cap < 1:
        raise ParameterError(f"trial_cap must be at least 1, got {trial_cap}")
    samples = np.empty(count, dtype=np.int64)
    trials = np.empty(count, dtype=np.int64)
    filled = 0
    since_last = 0
    while filled < count:
        proposals = rng.integers(0, 1 << width, size=PROPOSAL_CHUNK, dtype=np.int64)
        coins = rng.random(PROPOSAL_CHUNK)
        accepted = np.flatnonzero(coins < acceptance(proposals))
        previous = -1
        for position in accepted:
            used = since_last + int(position) - previous
            if used > trial_cap:
                break
            samples[filled] = proposals[position]
            trials[filled] = used
            filled += 1
            since_last = 0
            previous = int(position)
            if filled == count:
                break
        else:
            since_last += PROPOSAL_CHUNK - 1 - previous
            if since_last <= trial_cap:
                continue
        if filled < count:
            logger.warning(f"⛔ {what} sampler exhausted its trial cap of {trial_cap}")
            raise BudgetExceededError(f"{what} sampler needed more than {trial_cap} trials for one sample")
    return samples, trials


def rejection_sample_batch(
    g: GibbsGuess, count: int, rng: np.random.Generator, trial_cap: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """``count`` independent draws from ``mu_t`` and the trials each one used."""
    trial_cap = default_trial_cap(g) if trial_cap is None else int(trial_cap)
    return _accept_batch(g.width, lambda xs: np.exp(-g.energy(xs)), int(count), rng, trial_cap, "Gibbs")


def rejection_sample(g: GibbsGuess, rng: np.random.Generator, trial_cap: Optional[int] = None) -> SampleReport:
    """One draw from ``mu_t``: accept a uniform proposal x with probability exp(-H_t(x))."""
    samples, trials = rejection_sample_batch(g, 1, rng, trial_cap)
    used = int(trials[0])
    return SampleReport(BitString(int(samples[0]), g.width), used, 1.0 / used)


def _require_binary(f: Witness) -> None:
    if not f.binary:
        raise ParameterError("uniform-on-L sampling needs a binary witness")


def sample_uniform_on_L_batch(
    f: Witness, count: int, rng: np.random.Generator, trial_cap: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """``count`` uniform draws from ``L = {x: f(x) = 1}`` and the evaluations of f each used."""
    _require_binary(f)
    trial_cap = int(TRIAL_CAP_FACTOR * (1 << f.width)) if trial_cap is None else int(trial_cap)
    return _accept_batch(f.width, f.evaluate_many, int(count), rng, trial_cap, "uniform-on-L")


def sample_uniform_on_L(f: Witness, rng: np.random.Generator, trial_cap: Optional[int] = None) -> SampleReport:
    samples, trials = sample_uniform_on_L_batch(f, 1, rng, trial_cap)
    used = int(trials[0])
    return SampleReport(BitString(int(samples[0]), f.width), used, 1.0 / used)


def batch_acceptance(trials: np.ndarray) -> float:
    """Accepted samples per trial over a batch."""
    return float(len(trials) / np.sum(trials)) if len(trials) else 0.0
