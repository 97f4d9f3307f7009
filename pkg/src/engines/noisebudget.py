"""
Noise budgets from strong data processing.

Local depolarizing noise with rate p contracts ``D(rho || I/d)`` by ``1 - alpha`` with
``alpha = 2p - p^2`` per noise layer; after D unitary layers (D + 1 noise layers) the
output divergence, and hence the game length, is at most ``(1-alpha)^(D+1) n ln 2``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import CapacityError, ParameterError
from .distcore import LN2, DensePmf, relative_entropy
from .mirror import iteration_cap
from .qsim import (
    Circuit,
    NoiseSpec,
    depolarize,
    noisy_output_state,
    random_brickwork,
    random_density_matrix,
    von_neumann_entropy,
)

logger = logging.getLogger(__name__)

CHAIN_CAP = 8
SDPI_CAP = 4


@dataclass(frozen=True)
class SdpiSpec:
    alpha: float
    source: str = "user-supplied"
    p: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.source == "depolarizing" and (
            self.p is None or abs(self.alpha - depolarizing_alpha(self.p)) > 1e-15
        ):
            raise ParameterError("depolarizing alpha must equal 2p - p^2")

    @classmethod
    def depolarizing(cls, p: float) -> "SdpiSpec":
        return cls(depolarizing_alpha(p), "depolarizing", p)


@dataclass(frozen=True)
class NoiseBudgetReport:
    n: int
    depth: int
    alpha: float
    entropy_budget: float
    iteration_bound: int
    sampling_cost_bound: float

    @property
    def entropy_budget_bits(self) -> float:
        return self.entropy_budget / LN2


@dataclass(frozen=True)
class SdpiReport:
    n: int
    p: float
    alpha: float
    trials: int
    worst_ratio: float
    holds: bool


@dataclass(frozen=True)
class ChainReport:
    n: int
    depth: int
    p: float
    alpha: float
    divergence: float
    state_divergence: float
    budget: float
    holds: bool
    noisy_round_cap: int
    noiseless_round_cap: int


def depolarizing_alpha(p: float) -> float:
    """``1 - (1 - p)^2``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"noise rate must lie in [0, 1], got {p}")
    return 2.0 * p - p * p


def entropy_budget(n: int, depth: int, alpha: float) -> float:
    """``(1 - alpha)^(D+1) n ln 2`` nats."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    if depth < 0:
        raise ParameterError(f"depth must be non-negative, got {depth}")
    return (1.0 - alpha) ** (depth + 1) * n * LN2


def iteration_bound(eps: float, budget: float) -> int:
    return iteration_cap(budget, eps)


def sampling_cost_bound(eps: float, budget: float) -> float:
    """``exp(4 budget / eps)`` evaluations per sample; ``inf`` on overflow."""
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    try:
        return math.exp(4.0 * budget / eps)
    except OverflowError:
        return math.inf


def budget_report(n: int, depth: int, sdpi: SdpiSpec, eps: float) -> NoiseBudgetReport:
    budget = entropy_budget(n, depth, sdpi.alpha)
    return NoiseBudgetReport(
        n=n,
        depth=depth,
        alpha=sdpi.alpha,
        entropy_budget=budget,
        iteration_bound=iteration_bound(eps, budget),
        sampling_cost_bound=sampling_cost_bound(eps, budget),
    )


def annealing_beta(eps: float, budget: float) -> float:
    """Inverse temperature ``(eps/4) T`` reached after ``T = 16 budget / eps^2`` rounds."""
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return 4.0 * budget / eps


def example_beta(eps: float, n: int, depth: int, p: float) -> float:
    """``(1 - p)^(2D+2) n / eps``, the annealing temperature as the noisy MAXCUT story states it."""
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return (1.0 - p) ** (2 * depth + 2) * n / eps


def _divergence_from_mixed(n: int, entropy: float) -> float:
    return max(0.0, n * LN2 - entropy)


def verify_sdpi(noise: NoiseSpec, n: int, trials: int, rng: np.random.Generator) -> SdpiReport:
    """Check ``D(Phi(rho)||I/d) <= (1 - alpha) D(rho||I/d)`` on random pure and mixed states.

    Even trials draw pure states, odd trials full-rank Hilbert-Schmidt states.
    """
    if n > SDPI_CAP:
        raise CapacityError(f"SDPI checks are capped at {SDPI_CAP} qubits, got {n}")
    alpha = depolarizing_alpha(noise.p)
    worst = 0.0
    for trial in range(trials):
        rho = random_density_matrix(n, rng, rank=1 if trial % 2 == 0 else None)
        before = _divergence_from_mixed(n, von_neumann_entropy(rho))
        after = _divergence_from_mixed(n, von_neumann_entropy(depolarize(rho, noise.p)))
        if before > 1e-12:
            worst = max(worst, after / before)
    report = SdpiReport(
        n=n, p=noise.p, alpha=alpha, trials=trials, worst_ratio=worst, holds=worst <= 1.0 - alpha + 1e-9
    )
    if not report.holds:
        logger.warning(f"⚠️ SDPI ratio {worst:.6f} exceeds 1 - alpha = {1.0 - alpha:.6f}")
    return report


def noisy_chain_check(c: Circuit, noise: NoiseSpec, eps: float) -> ChainReport:
    """Exact ``D(nu || U)`` of the noisy output against its budget.

    ``state_divergence`` is ``D(rho || I/2^n)`` of the final density matrix; it bounds
    ``divergence`` from above and never grows when noisy layers are appended.
    """
    if c.width > CHAIN_CAP:
        raise CapacityError(f"chain checks are capped at {CHAIN_CAP} qubits, got {c.width}")
    alpha = depolarizing_alpha(noise.p)
    rho = noisy_output_state(c, noise)
    nu = DensePmf.from_weights(np.clip(np.diagonal(rho.entries).real, 0.0, None))
    divergence = relative_entropy(nu, DensePmf.uniform(c.width))
    state_divergence = _divergence_from_mixed(c.width, von_neumann_entropy(rho))
    budget = entropy_budget(c.width, c.depth, alpha)
    return ChainReport(
        n=c.width,
        depth=c.depth,
        p=noise.p,
        alpha=alpha,
        divergence=divergence,
        state_divergence=state_divergence,
        budget=budget,
        holds=max(divergence, state_divergence) <= budget + 1e-9,
        noisy_round_cap=iteration_bound(eps, budget),
        noiseless_round_cap=iteration_bound(eps, c.width * LN2),
    )


def depth_prefixes(c: Circuit, depths: Sequence[int]) -> Dict[int, Circuit]:
    """The first ``D`` layers of ``c`` for each requested ``D``."""
    if any(d < 0 or d > c.depth for d in depths):
        raise ParameterError(f"prefix depths must lie in [0, {c.depth}], got {list(depths)}")
    return {d: Circuit(c.width, c.layers[:d], c.seed) for d in depths}


def noise_grid(
    n: int,
    depths: Sequence[int],
    rates: Sequence[float],
    eps: float,
    seed: int,
    threads: int = 1,
    circuit_factory: Optional[Callable[[int], Circuit]] = None,
) -> pd.DataFrame:
    """One row per (D, p): budget, exact divergences, round caps and both annealing temperatures.

    By default the depths are prefixes of one brickwork circuit, so a deeper point is the
    shallower one followed by more noisy layers.
    """
    if circuit_factory is None:
        circuits = depth_prefixes(random_brickwork(n, max(depths), seed), depths)
    else:
        circuits = {depth: circuit_factory(depth) for depth in depths}
    points = [(depth, p) for depth in depths for p in rates]

    def evaluate(point) -> dict:
        depth, p = point
        chain = noisy_chain_check(circuits[depth], NoiseSpec(p), eps)
        return {
            "n": n,
            "D": depth,
            "p": p,
            "alpha": chain.alpha,
            "budget_nats": chain.budget,
            "divergence_nats": chain.divergence,
            "state_divergence_nats": chain.state_divergence,
            "holds": chain.holds,
            "iteration_bound": chain.noisy_round_cap,
            "noiseless_iteration_cap": chain.noiseless_round_cap,
            "sampling_cost_bound": sampling_cost_bound(eps, chain.budget),
            "annealing_beta": annealing_beta(eps, chain.budget),
            "example_beta": example_beta(eps, n, depth, p),
        }

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        rows: List[dict] = list(executor.map(evaluate, points))
    grid = pd.DataFrame(rows)
    failures = int((~grid["holds"]).sum()) if len(grid) else 0
    logger.info(f"📉 noise grid: {len(grid)} points, {failures} budget violations")
    return grid
