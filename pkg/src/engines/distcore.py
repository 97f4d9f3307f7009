"""
Bit-string distributions, divergences and the optimal distinguisher.

All entropic quantities are in nats. Bit strings are indexed big-endian: qubit 0 is the
leftmost character of the string and the most significant bit of the integer index,
so "100" on three qubits is index 4.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Sequence, Tuple, Union

import numpy as np
from scipy.special import entr, rel_entr

from ..errors import CapacityError, DimensionError, ParameterError, ValidityError

if TYPE_CHECKING:
    from .witness import Witness

logger = logging.getLogger(__name__)

WIDTH_CAP = 20
NORMALIZATION_TOL = 1e-9
LN2 = math.log(2.0)


@dataclass(frozen=True, order=True)
class BitString:
    """A fixed-width bit string stored as an unsigned integer."""

    bits: int
    width: int

    def __post_init__(self):
        check_width(self.width)
        if not 0 <= self.bits < (1 << self.width):
            raise ValidityError(f"value {self.bits} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValidityError(f"not a bit string: {text!r}")
        return cls(int(text, 2), len(text))

    def bit(self, qubit: int) -> int:
        """Value of ``x_qubit`` (qubit 0 is the most significant bit)."""
        return (self.bits >> (self.width - 1 - qubit)) & 1

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")


SampleBatch = Union[Sequence[BitString], Sequence[int], np.ndarray]


def check_width(width: int, cap: int = WIDTH_CAP) -> int:
    if width < 1:
        raise ParameterError(f"width must be at least 1, got {width}")
    if width > cap:
        raise CapacityError(f"width {width} exceeds the dense cap of {cap}")
    return width


def as_indices(samples: SampleBatch, width: int) -> np.ndarray:
    """Normalize a batch of samples (BitStrings or integer indices) to an int64 array."""
    if isinstance(samples, np.ndarray):
        indices = samples.astype(np.int64, copy=False)
    else:
        items = list(samples)
        if items and isinstance(items[0], BitString):
            if any(s.width != width for s in items):
                raise DimensionError(f"sample widths do not all equal {width}")
            indices = np.fromiter((s.bits for s in items), dtype=np.int64, count=len(items))
        else:
            indices = np.asarray(items, dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= (1 << width)):
        raise DimensionError(f"sample index outside the {width}-bit range")
    return indices


def bit_matrix(width: int) -> np.ndarray:
    """``(2**width, width)`` 0/1 matrix whose row x holds the bits of x, qubit 0 first."""
    check_width(width)
    indices = np.arange(1 << width, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def parity(indices: np.ndarray, mask: int) -> np.ndarray:
    """Parity ``<mask, x> mod 2`` for every index."""
    masked = np.asarray(indices, dtype=np.int64) & int(mask)
    result = np.zeros(masked.shape, dtype=np.int64)
    while np.any(masked):
        result ^= masked & 1
        masked = masked >> 1
    return result


@dataclass(frozen=True)
class DensePmf:
    """Explicit probability table over all ``2**width`` bit strings."""

    width: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_width(self.width)
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (1 << self.width,):
            raise DimensionError(
                f"expected {1 << self.width} probabilities for width {self.width}, got {probs.shape}"
            )
        if np.any(probs < 0):
            raise ValidityError("probabilities must be non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidityError(f"probabilities sum to {total!r}, not 1")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, width: int) -> "DensePmf":
        check_width(width)
        return cls(width, np.full(1 << width, 2.0**-width))

    @classmethod
    def point_mass(cls, width: int, index: int = 0) -> "DensePmf":
        check_width(width)
        probs = np.zeros(1 << width)
        probs[int(index)] = 1.0
        return cls(width, probs)

    @classmethod
    def from_weights(cls, weights: np.ndarray) -> "DensePmf":
        """Normalize a non-negative weight vector of length ``2**n``."""
        weights = np.asarray(weights, dtype=np.float64)
        width = int(round(math.log2(weights.size))) if weights.size else 0
        if weights.size != (1 << max(width, 0)):
            raise DimensionError(f"weight vector length {weights.size} is not a power of two")
        total = weights.sum()
        if not np.isfinite(total) or total <= 0:
            raise ValidityError("weights must have a positive finite sum")
        return cls(width, weights / total)

    @classmethod
    def random(cls, width: int, rng: np.random.Generator, concentration: float = 1.0) -> "DensePmf":
        """Dirichlet-distributed pmf (flat Dirichlet by default)."""
        check_width(width)
        return cls.from_weights(rng.dirichlet(np.full(1 << width, concentration)))

    @property
    def size(self) -> int:
        return 1 << self.width

    def prob(self, x: Union[BitString, int]) -> float:
        """``P(x)`` for a BitString or a big-endian integer index."""
        if not isinstance(x, BitString):
            x = BitString(int(x), self.width)
        if x.width != self.width:
            raise DimensionError(f"bit string width {x.width} != pmf width {self.width}")
        return float(self.probs[x.bits])

    def expectation(self, values: np.ndarray) -> float:
        """``E[values]`` for a table of per-string values."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.probs.shape:
            raise DimensionError(f"value table shape {values.shape} != {self.probs.shape}")
        return float(self.probs @ values)

    def mass(self, mask: np.ndarray) -> float:
        """Probability of a set given as a boolean mask."""
        return float(self.probs[np.asarray(mask, dtype=bool)].sum())

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` indices by inverse-CDF lookup."""
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        draws = rng.random(int(count))
        return np.searchsorted(cdf, draws, side="right").astype(np.int64)

    def to_json(self) -> Dict[str, Any]:
        return {"width": self.width, "probs": self.probs.tolist()}

    @classmethod
    def from_json(cls, payload: Union[str, Dict[str, Any]]) -> "DensePmf":
        data = json.loads(payload) if isinstance(payload, str) else payload
        return cls(int(data["width"]), np.asarray(data["probs"], dtype=np.float64))


@dataclass(frozen=True)
class DivergenceReport:
    tv: float
    kl_nats: float
    shannon_nats: float
    renyi2_nats: float


def _same_width(a: DensePmf, b: DensePmf) -> None:
    if a.width != b.width:
        raise DimensionError(f"pmf widths differ: {a.width} vs {b.width}")


def tv_distance(a: DensePmf, b: DensePmf) -> float:
    """Total variation distance ``(1/2) sum |a - b|``."""
    _same_width(a, b)
    return 0.5 * float(np.abs(a.probs - b.probs).sum())


def relative_entropy(a: DensePmf, b: DensePmf) -> float:
    """``D(a || b)`` in nats; ``inf`` when a is not supported inside b."""
    _same_width(a, b)
    return float(rel_entr(a.probs, b.probs).sum())


def shannon_entropy(a: DensePmf) -> float:
    return float(entr(a.probs).sum())


def renyi2_entropy(a: DensePmf) -> float:
    """Collision entropy ``-ln sum a(x)^2``."""
    return -math.log(float(a.probs @ a.probs))


def collision_probability(a: DensePmf) -> float:
    return float(a.probs @ a.probs)


def divergence_report(a: DensePmf, b: DensePmf) -> DivergenceReport:
    """TV and KL of ``a`` against ``b`` plus both entropies of ``a``."""
    return DivergenceReport(
        tv=tv_distance(a, b),
        kl_nats=relative_entropy(a, b),
        shannon_nats=shannon_entropy(a),
        renyi2_nats=renyi2_entropy(a),
    )


def optimal_distinguisher(a: DensePmf, b: DensePmf) -> Tuple["Witness", float]:
    """Indicator of ``S = {x: a(x) >= b(x)}`` and its gap ``E_a - E_b``, which equals TV."""
    from .witness import IndicatorWitness

    _same_width(a, b)
    members = a.probs >= b.probs
    gap = float(a.probs[members].sum() - b.probs[members].sum())
    return IndicatorWitness(a.width, members, label="optimal"), gap


def hoeffding_samples(eps: float, delta: float) -> int:
    """Samples per side so each empirical mean of a [0,1] function is within eps/2 w.p. 1-delta."""
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must lie in (0, 1], got {eps}")
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(2.0 * eps**-2 * math.log(2.0 / delta) - 1e-9)


def nats_to_bits(value: float) -> float:
    return value / LN2
