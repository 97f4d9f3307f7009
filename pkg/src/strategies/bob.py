"""
Bob's strategies. Each proposes a witness ``f`` with ``E_mu(f) - E_nu(f) >= eps`` or
concedes (returns None). Bob knows nu exactly and reads mu from Alice's disclosure.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional

from ..engines import DensePmf, Witness, complement, heavy_set_witness, optimal_distinguisher
from ..engines.stab import PauliZString, z_string_witness
from ..engines.witness import MaxCutGraph, MaxCutWitness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Proposal:
    witness: Witness
    claimed_gap: float


class BobStrategy(ABC):
    name: str = "bob"

    @abstractmethod
    def candidate(self, target: DensePmf, mu: DensePmf) -> Optional[Witness]:
        """Witness to try against ``mu``, oriented Alice-high."""

    def propose(self, target: DensePmf, mu: DensePmf, eps: float, history: List[Witness]) -> Optional[Proposal]:
        """Play the candidate if its exact gap reaches ``eps``; otherwise concede."""
        witness = self.candidate(target, mu)
        if witness is None:
            return None
        gap = witness.gap(mu, target)
        if gap < eps:
            logger.debug(f"{self.name}: best gap {gap:.4f} < eps {eps}, conceding")
            return None
        return Proposal(witness, gap)


class OptimalIndicatorBob(BobStrategy):
    """Indicator of ``{x: mu(x) >= nu(x)}``; its gap is the exact TV distance."""

    name = "optimal-indicator"

    def candidate(self, target: DensePmf, mu: DensePmf) -> Optional[Witness]:
        witness, _ = optimal_distinguisher(mu, target)
        return witness


class HeavySetBob(BobStrategy):
    """Complement of nu's heavy set ``{x: nu(x) >= theta}`` (theta = 2^-n by default)."""

    name = "heavy-set"

    def __init__(self, theta: Optional[float] = None):
        self.theta = theta

    def candidate(self, target: DensePmf, mu: DensePmf) -> Optional[Witness]:
        return complement(heavy_set_witness(target, self.theta))


class CliffordBob(BobStrategy):
    """Plays the flipped projector of a stabilizer Z-string; concedes if there is none."""

    name = "clifford"

    def __init__(self, z_string: Optional[PauliZString]):
        self.z_string = z_string

    def candidate(self, target: DensePmf, mu: DensePmf) -> Optional[Witness]:
        if self.z_string is None:
            return None
        return complement(z_string_witness(self.z_string))


class MaxCutBob(BobStrategy):
    """Plays ``1 - f_G`` so that Alice's guess anneals towards large cuts."""

    name = "maxcut"

    def __init__(self, graph: MaxCutGraph):
        self.graph = graph

    def candidate(self, target: DensePmf, mu: DensePmf) -> Optional[Witness]:
        return MaxCutWitness(self.graph, complemented=True)
