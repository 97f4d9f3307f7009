"""
Mirror-descent learner: Gibbs-form guesses mu_t ~ exp(-(eps/4) * sum_i f_i).

A guess is stored as (eps, witness list). The energy table H_t is accumulated lazily for
desk-scale speed; the partition function is only formed by ``exact_pmf``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import DimensionError, ParameterError
from .distcore import LN2, DensePmf, check_width, relative_entropy, tv_distance
from .witness import Witness, complement

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GibbsGuess:
    """Alice's guess after ``t`` updates."""

    width: int
    eps: float
    witnesses: Tuple[Witness, ...] = ()
    _energy: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def t(self) -> int:
        return len(self.witnesses)

    @property
    def learning_rate(self) -> float:
        return self.eps / 4.0

    def energy_table(self) -> np.ndarray:
        """``H_t(x)`` for every x."""
        if self._energy is None:
            energy = np.zeros(1 << self.width)
            for w in self.witnesses:
                energy = energy + self.learning_rate * w.table()
            energy.setflags(write=False)
            object.__setattr__(self, "_energy", energy)
        return self._energy

    def energy(self, indices: np.ndarray) -> np.ndarray:
        """``H_t`` at a batch of strings: one lookup per string, no normalization."""
        return self.energy_table()[np.asarray(indices, dtype=np.int64)]

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "gibbs",
            "width": self.width,
            "eps": self.eps,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


@dataclass(frozen=True)
class ProgressEntry:
    t: int
    claimed_gap: Optional[float]
    divergence: float
    bound: float
    tv: float
    tv_bound: float
    gaps_at_least_eps: bool
    bound_holds: bool


@dataclass
class ProgressLedger:
    """Round-by-round record of D(nu || mu_t) against its mirror-descent bound."""

    entries: List[ProgressEntry] = field(default_factory=list)

    def record(self, entry: ProgressEntry) -> ProgressEntry:
        self.entries.append(entry)
        return entry

    def violations(self) -> List[ProgressEntry]:
        return [e for e in self.entries if e.gaps_at_least_eps and not e.bound_holds]

    def divergence_drops(self) -> List[float]:
        return [a.divergence - b.divergence for a, b in zip(self.entries, self.entries[1:])]


def initial_guess(n: int, eps: float) -> GibbsGuess:
    check_width(n)
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must lie in (0, 1], got {eps}")
    return GibbsGuess(n, float(eps))


def update(g: GibbsGuess, f: Witness) -> GibbsGuess:
    """Append ``f``: every weight is multiplied by ``exp(-(eps/4) f(x))``."""
    if f.width != g.width:
        raise DimensionError(f"witness width {f.width} != guess width {g.width}")
    energy = None
    if g._energy is not None:
        energy = g._energy + g.learning_rate * f.table()
        energy.setflags(write=False)
    return GibbsGuess(g.width, g.eps, g.witnesses + (f,), energy)


def exact_pmf(g: GibbsGuess) -> Tuple[DensePmf, float]:
    """Materialize ``mu_t`` and return it with ``Z_t``."""
    energy = g.energy_table()
    log_z = float(logsumexp(-energy))
    probs = np.exp(-energy - log_z)
    return DensePmf(g.width, probs / probs.sum()), math.exp(log_z)


def iteration_cap(d_ref: float, eps: float) -> int:
    """``ceil(16 * d_ref / eps^2)`` rounds."""
    if d_ref < 0:
        raise ParameterError(f"reference divergence must be non-negative, got {d_ref}")
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return max(0, math.ceil(16.0 * d_ref / eps**2 - 1e-9))


def tv_bound(d_ref: float, t: int, eps: float) -> float:
    """Pinsker bound ``sqrt(2 (D(nu||U) - t eps^2/16))``, zero once the budget is spent."""
    return math.sqrt(2.0 * max(0.0, d_ref - t * eps**2 / 16.0))


def round_gaps(g: GibbsGuess, target: DensePmf) -> List[float]:
    """Exact gap ``E_{mu_{i-1}}(f_i) - E_nu(f_i)`` of every witness at the round it was played."""
    gaps = []
    energy = np.zeros(1 << g.width)
    for w in g.witnesses:
        weights = np.exp(-energy - logsumexp(-energy))
        table = w.table()
        gaps.append(float(weights @ table) - target.expectation(table))
        energy = energy + g.learning_rate * table
    return gaps


def check_progress(g: GibbsGuess, target: DensePmf, ledger: Optional[ProgressLedger] = None) -> ProgressEntry:
    """Compare ``D(nu || mu_t)`` with ``D(nu || U) - t eps^2 / 16``.

    The bound is asserted only when every played witness had exact gap at least eps; a
    violation is reported in the entry, never raised.
    """
    if target.width != g.width:
        raise DimensionError(f"target width {target.width} != guess width {g.width}")
    mu, _ = exact_pmf(g)
    d_ref = relative_entropy(target, DensePmf.uniform(g.width))
    divergence = relative_entropy(target, mu)
    gaps = round_gaps(g, target)
    bound = d_ref - g.t * g.eps**2 / 16.0
    entry = ProgressEntry(
        t=g.t,
        claimed_gap=gaps[-1] if gaps else None,
        divergence=divergence,
        bound=bound,
        tv=tv_distance(target, mu),
        tv_bound=tv_bound(d_ref, g.t, g.eps),
        gaps_at_least_eps=all(gap >= g.eps - 1e-12 for gap in gaps),
        bound_holds=divergence <= bound + 1e-9,
    )
    if entry.gaps_at_least_eps and not entry.bound_holds:
        logger.warning(f"⚠️ progress bound violated at t={g.t}: {divergence:.6f} > {bound:.6f}")
    if ledger is not None:
        ledger.record(entry)
    return entry


def match_expectations(
    target: DensePmf, functions: Sequence[Witness], eps: float, round_cap: Optional[int] = None
) -> Tuple[GibbsGuess, ProgressLedger]:
    """Mirror descent against a fixed function family.

    Each round plays the first function whose expectation is off by more than ``eps``,
    complemented when the target side is the larger one, until all are within ``eps``.
    """
    guess = initial_guess(target.width, eps)
    d_ref = relative_entropy(target, DensePmf.uniform(target.width))
    round_cap = iteration_cap(d_ref, eps) if round_cap is None else round_cap
    ledger = ProgressLedger()
    check_progress(guess, target, ledger)
    for _ in range(round_cap):
        mu, _ = exact_pmf(guess)
        played = None
        for f in functions:
            gap = f.gap(mu, target)
            if gap >= eps:
                played = f
            elif -gap >= eps:
                played = complement(f)
            if played is not None:
                break
        if played is None:
            break
        guess = update(guess, played)
        check_progress(guess, target, ledger)
    logger.info(f"🧭 expectation matching stopped after {guess.t} rounds")
    return guess, ledger


def random_circuit_round_bound(eps: float, delta: float) -> int:
    """``ceil(16 eps^-2 (ln 3 - ln delta))``: rounds needed when S(nu) >= n ln2 - ln3 + ln delta."""
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return iteration_cap(math.log(3.0) - math.log(delta), eps)


def random_circuit_tv_bound(t: int, eps: float, delta: float) -> float:
    return tv_bound(math.log(3.0) - math.log(delta), t, eps)


def annealing_temperatures(t: int, eps: float) -> Dict[str, float]:
    """Inverse temperature of the t-round MAXCUT guess, as updated and as the example prints it."""
    return {"update_rule": t * eps / 4.0, "example_form": t / (4.0 * eps)}


def worst_case_divergence(n: int) -> float:
    """``D(point mass || U) = n ln 2``."""
    return n * LN2
