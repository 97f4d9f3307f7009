"""
The referee's sample schedule and claim check.

Round t checks up to t witnesses, so each side gets enough samples that every empirical
mean is within eps/2 of its expectation except with probability ``delta^t / t``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ParameterError, ProtocolError
from .distcore import DensePmf, SampleBatch, as_indices
from .witness import Witness

logger = logging.getLogger(__name__)

SCHEDULE_CONSTANT = 2.0


@dataclass(frozen=True)
class ClaimCheck:
    empirical_gap: float
    accepted: bool
    alice_mean: float
    bob_mean: float


def sample_schedule(t: int, eps: float, delta: float, constant: float = SCHEDULE_CONSTANT) -> int:
    """``ceil(c eps^-2 (ln 2t + t ln(1/delta)))`` samples per side in round t (c = 2)."""
    if t < 1:
        raise ParameterError(f"round index must be at least 1, got {t}")
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must lie in (0, 1], got {eps}")
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(constant * eps**-2 * (math.log(2.0 * t) + t * math.log(1.0 / delta)) - 1e-9)


def verify_claim(
    bob_samples: SampleBatch,
    alice_samples: SampleBatch,
    f: Witness,
    eps: float,
    expected: Optional[int] = None,
) -> ClaimCheck:
    """Accept iff ``mean_alice(f) - mean_bob(f) >= eps / 2``."""
    bob = as_indices(bob_samples, f.width)
    alice = as_indices(alice_samples, f.width)
    if len(bob) != len(alice) or not len(bob):
        raise ProtocolError(f"sample batches differ or are empty: bob {len(bob)}, alice {len(alice)}")
    if expected is not None and len(bob) != expected:
        raise ProtocolError(f"expected {expected} samples per side, got {len(bob)}")
    alice_mean = float(np.mean(f.evaluate_many(alice)))
    bob_mean = float(np.mean(f.evaluate_many(bob)))
    gap = alice_mean - bob_mean
    return ClaimCheck(gap, gap >= eps / 2.0, alice_mean, bob_mean)


def verify_exact(mu: DensePmf, nu: DensePmf, f: Witness, eps: float) -> ClaimCheck:
    """Same verdict rule on exact expectations: accept iff ``E_mu(f) - E_nu(f) >= eps / 2``."""
    alice_mean = f.expectation(mu)
    bob_mean = f.expectation(nu)
    gap = alice_mean - bob_mean
    return ClaimCheck(gap, gap >= eps / 2.0, alice_mean, bob_mean)
