"""
Linear XEB, XHOG scoring and the distinguisher-to-spoofer reduction.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np

from ..errors import DimensionError, InfeasibleError, ParameterError
from .distcore import DensePmf, SampleBatch, as_indices, renyi2_entropy
from .sampler import sample_uniform_on_L_batch
from .witness import IndicatorWitness, Witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class XhogParams:
    """``b`` is the advantage threshold, ``s`` the success-probability parameter, ``k`` the sample count."""

    b: float
    s: float = 1.0
    k: int = 1

    def __post_init__(self):
        if self.b <= 1:
            raise ParameterError(f"b must exceed 1, got {self.b}")
        if self.k < 1:
            raise ParameterError(f"k must be at least 1, got {self.k}")

    def sample_bound(self) -> int:
        return xhog_sample_bound(self.b, self.s)


@dataclass(frozen=True)
class XhogScore:
    mean_prob: float
    passes_b: bool
    xeb: float
    distinct: int


@dataclass(frozen=True)
class SpoofReport:
    samples: List[int] = field(repr=False)
    score: XhogScore
    n: int
    b: float
    k: int
    trials: int
    draws: int
    set_size: int
    exact_gap: float
    exact_mean_prob: float
    geometric_evaluations: float
    eps4_evaluations: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "b": self.b,
            "k": self.k,
            "mean_prob": self.score.mean_prob,
            "xeb": self.score.xeb,
            "passes_b": self.score.passes_b,
            "trials": self.trials,
            "draws": self.draws,
            "set_size": self.set_size,
            "exact_gap": self.exact_gap,
            "exact_mean_prob": self.exact_mean_prob,
            "geometric_evaluations": self.geometric_evaluations,
            "eps4_evaluations": self.eps4_evaluations,
            "samples": [format(x, f"0{self.n}b") for x in self.samples],
        }


@dataclass(frozen=True)
class HeavyMassCheck:
    mass: float
    size: int
    eps: float
    required_size: float
    holds: bool
    delta_required_size: Optional[float] = None
    delta_applicable: Optional[bool] = None


def xeb_fidelity(mu: DensePmf, nu: DensePmf) -> float:
    """``2^n E_nu(mu) - 1``."""
    if mu.width != nu.width:
        raise DimensionError(f"pmf widths differ: {mu.width} vs {nu.width}")
    return float((1 << nu.width) * (nu.probs @ mu.probs) - 1.0)


def score_samples(samples: SampleBatch, nu: DensePmf, b: float) -> XhogScore:
    """Score the distinct strings of ``samples`` against the exact ``nu``."""
    indices = as_indices(samples, nu.width)
    if not indices.size:
        raise ParameterError("cannot score an empty sample list")
    distinct = np.unique(indices)
    mean_prob = float(nu.probs[distinct].mean())
    dim = 1 << nu.width
    return XhogScore(
        mean_prob=mean_prob,
        passes_b=mean_prob >= b / dim,
        xeb=dim * mean_prob - 1.0,
        distinct=int(distinct.size),
    )


def xhog_sample_bound(b: float, s: float = 1.0) -> int:
    """``ceil(1 / (((2s - 1) b - 1)(b - 1)))`` samples."""
    if b <= 1:
        raise ParameterError(f"b must exceed 1, got {b}")
    denominator = ((2.0 * s - 1.0) * b - 1.0) * (b - 1.0)
    if denominator <= 0:
        raise ParameterError(f"(2s-1)b must exceed 1, got s={s}, b={b}")
    return math.ceil(1.0 / denominator - 1e-9)


def spoof_xhog(
    f: Witness,
    nu: DensePmf,
    k: int,
    rng: np.random.Generator,
    eps: Optional[float] = None,
    b: Optional[float] = None,
    trial_cap: Optional[int] = None,
) -> SpoofReport:
    """Collect ``k`` distinct uniform members of ``L = {f = 1}`` and score them against ``nu``.

    ``eps`` is the certified gap ``E_nu(f) - E_U(f)``; it is checked exactly. The score
    threshold ``b`` defaults to ``1 + exact gap``.
    """
    if not f.binary:
        raise ParameterError("spoofing needs a binary witness")
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    n = nu.width
    members = f.table() > 0.5
    set_size = int(members.sum())
    if set_size < k:
        raise InfeasibleError(f"|L| = {set_size} cannot supply {k} distinct samples")
    exact_gap = f.gap(nu, DensePmf.uniform(n))
    if eps is not None and exact_gap < eps - 1e-12:
        raise ParameterError(f"exact gap {exact_gap:.6g} is below the certified eps {eps}")
    b = 1.0 + max(exact_gap, 0.0) if b is None else float(b)

    collected: List[int] = []
    seen = set()
    trials = 0
    draws = 0
    while len(collected) < k:
        batch, used = sample_uniform_on_L_batch(f, k - len(collected), rng, trial_cap)
        trials += int(used.sum())
        draws += len(batch)
        for x in batch.tolist():
            if x not in seen:
                seen.add(x)
                collected.append(x)

    score = score_samples(np.asarray(collected, dtype=np.int64), nu, b)
    gap_for_cost = eps if eps is not None else exact_gap
    report = SpoofReport(
        samples=collected,
        score=score,
        n=n,
        b=b,
        k=k,
        trials=trials,
        draws=draws,
        set_size=set_size,
        exact_gap=exact_gap,
        exact_mean_prob=nu.mass(members) / set_size,
        geometric_evaluations=k * (1 << n) / set_size,
        eps4_evaluations=gap_for_cost**-4 if gap_for_cost > 0 else math.inf,
    )
    logger.info(
        f"🎭 spoofed {k} distinct samples from |L|={set_size} in {trials} evaluations, "
        f"mean_prob*2^n = {score.mean_prob * (1 << n):.4f}"
    )
    return report


def _as_mask(L: Union[Witness, np.ndarray, Iterable[int]], width: int) -> np.ndarray:
    if isinstance(L, Witness):
        return L.table() > 0.5
    array = np.asarray(L)
    if array.dtype == bool and array.shape == (1 << width,):
        return array
    return IndicatorWitness.of(width, as_indices(list(L), width).tolist()).members


def heavy_mass_size_bound(
    nu: DensePmf,
    L: Union[Witness, np.ndarray, Iterable[int]],
    delta: Optional[float] = None,
    eps: Optional[float] = None,
) -> HeavyMassCheck:
    """Check ``nu(L) >= eps  =>  |L| >= eps^2 exp(S2(nu))`` (eps defaults to ``nu(L)``).

    With ``delta`` the high-entropy form ``|L| >= eps^2 delta 2^n / 3`` is also reported; it
    applies when ``S2(nu) >= n ln 2 - ln 3 + ln delta``.
    """
    mask = _as_mask(L, nu.width)
    mass = nu.mass(mask)
    size = int(mask.sum())
    eps = mass if eps is None else float(eps)
    s2 = renyi2_entropy(nu)
    required = eps**2 * math.exp(s2)
    holds = mass < eps or size >= required - 1e-9 * max(1.0, required)
    check = HeavyMassCheck(mass=mass, size=size, eps=eps, required_size=required, holds=holds)
    if delta is not None:
        if not 0 < delta < 1:
            raise ParameterError(f"delta must lie in (0, 1), got {delta}")
        n = nu.width
        applicable = s2 >= n * math.log(2.0) - math.log(3.0) + math.log(delta)
        check = HeavyMassCheck(
            mass=mass,
            size=size,
            eps=eps,
            required_size=required,
            holds=holds,
            delta_required_size=eps**2 * delta * (1 << n) / 3.0,
            delta_applicable=applicable,
        )
    if not holds:
        logger.warning(f"⚠️ heavy set of mass {mass:.4g} has only {size} < {required:.4g} strings")
    return check
