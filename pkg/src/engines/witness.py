"""
Witness functions {0,1}^n -> [0,1] and their concrete forms.

A witness carries no orientation. Callers state which side of an expectation gap must
be larger; ``complement`` flips a witness to ``1 - f`` when the other side is needed.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Optional, Tuple

import networkx as nx
import numpy as np

from ..errors import DimensionError, ParameterError, ReductionFailureError, ValidityError
from .distcore import BitString, DensePmf, as_indices, bit_matrix, check_width, parity

logger = logging.getLogger(__name__)

RANGE_TOL = 1e-12


class CostClass(str, Enum):
    POLYTIME = "polytime"
    TABLE_BACKED = "table-backed"


class Witness(ABC):
    """Base class: a deterministic map from n-bit strings to [0, 1]."""

    width: int
    cost_class: CostClass = CostClass.POLYTIME
    binary: bool = False

    @abstractmethod
    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        """Values at a batch of integer indices."""

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        """Tagged-union JSON body."""

    def table(self) -> np.ndarray:
        """Values at every string, cached after the first call."""
        cached = getattr(self, "_table_cache", None)
        if cached is None:
            cached = np.asarray(
                self.evaluate_many(np.arange(1 << self.width, dtype=np.int64)), dtype=np.float64
            )
            cached.setflags(write=False)
            object.__setattr__(self, "_table_cache", cached)
        return cached

    def expectation(self, pmf: DensePmf) -> float:
        if pmf.width != self.width:
            raise DimensionError(f"witness width {self.width} != pmf width {pmf.width}")
        return pmf.expectation(self.table())

    def gap(self, high: DensePmf, low: DensePmf) -> float:
        """``E_high(f) - E_low(f)``."""
        return self.expectation(high) - self.expectation(low)


@dataclass(frozen=True, eq=False)
class TableWitness(Witness):
    """Dense table of 2^n values."""

    width: int
    values: np.ndarray = field(repr=False)
    label: str = "table"
    cost_class: CostClass = CostClass.TABLE_BACKED

    def __post_init__(self):
        check_width(self.width)
        values = np.asarray(self.values, dtype=np.float64).copy()
        if values.shape != (1 << self.width,):
            raise DimensionError(f"table length {values.shape} does not match width {self.width}")
        if values.min() < -RANGE_TOL or values.max() > 1 + RANGE_TOL:
            raise ValidityError("witness values must lie in [0, 1]")
        values = np.clip(values, 0.0, 1.0)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def binary(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        return self.values[np.asarray(indices, dtype=np.int64)]

    def to_json(self) -> Dict[str, Any]:
        return {"form": "table", "width": self.width, "label": self.label, "values": self.values.tolist()}


@dataclass(frozen=True, eq=False)
class IndicatorWitness(Witness):
    """Indicator of an explicit set, stored as a boolean membership mask."""

    width: int
    members: np.ndarray = field(repr=False)
    label: str = "indicator"
    cost_class: CostClass = CostClass.TABLE_BACKED
    binary: bool = True

    def __post_init__(self):
        check_width(self.width)
        members = np.asarray(self.members, dtype=bool).copy()
        if members.shape != (1 << self.width,):
            raise DimensionError(f"membership mask length {members.shape} does not match width")
        members.setflags(write=False)
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, width: int, strings: Iterable[int], label: str = "indicator") -> "IndicatorWitness":
        members = np.zeros(1 << width, dtype=bool)
        members[list(strings)] = True
        return cls(width, members, label=label)

    @property
    def size(self) -> int:
        return int(self.members.sum())

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        return self.members[np.asarray(indices, dtype=np.int64)].astype(np.float64)

    def to_json(self) -> Dict[str, Any]:
        return {
            "form": "indicator",
            "width": self.width,
            "label": self.label,
            "members": np.flatnonzero(self.members).tolist(),
        }


@dataclass(frozen=True, eq=False)
class ParityWitness(Witness):
    """``(1 + sign * (-1)^<z_mask, x>) / 2``: the diagonal projector of a signed Z-string."""

    width: int
    z_mask: int
    sign: int = 1
    binary: bool = True

    def __post_init__(self):
        check_width(self.width)
        if not 0 < self.z_mask < (1 << self.width):
            raise ValidityError(f"z_mask {self.z_mask} must be a nonzero {self.width}-bit mask")
        if self.sign not in (1, -1):
            raise ValidityError("sign must be +1 or -1")

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        odd = parity(indices, self.z_mask)
        return (1.0 + self.sign * (1.0 - 2.0 * odd)) / 2.0

    def to_json(self) -> Dict[str, Any]:
        return {"form": "parity", "width": self.width, "z_mask": self.z_mask, "sign": self.sign}


@dataclass(frozen=True, eq=False)
class HeavySetWitness(Witness):
    """Indicator of ``{x: reference(x) >= theta}``."""

    reference: DensePmf = field(repr=False)
    theta: float
    cost_class: CostClass = CostClass.TABLE_BACKED
    binary: bool = True

    @property
    def width(self) -> int:
        return self.reference.width

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        return (self.reference.probs[np.asarray(indices, dtype=np.int64)] >= self.theta).astype(
            np.float64
        )

    def to_json(self) -> Dict[str, Any]:
        return {"form": "heavy-set", "width": self.width, "theta": self.theta, "reference": self.reference.to_json()}


@dataclass(frozen=True)
class MaxCutGraph:
    """Simple undirected graph with a declared degree bound."""

    vertices: int
    edges: Tuple[Tuple[int, int], ...]
    max_degree: int

    def __post_init__(self):
        normalized = tuple(sorted(tuple(sorted((int(i), int(j)))) for i, j in self.edges))
        if any(i == j for i, j in normalized):
            raise ValidityError("self-loops are not allowed")
        if len(set(normalized)) != len(normalized):
            raise ValidityError("duplicate edges are not allowed")
        if any(not 0 <= v < self.vertices for edge in normalized for v in edge):
            raise ValidityError("edge endpoint outside the vertex range")
        if self.max_degree < 1:
            raise ValidityError("max_degree must be at least 1")
        degrees = np.bincount(np.asarray(normalized, dtype=np.int64).ravel(), minlength=self.vertices)
        if normalized and degrees.max() > self.max_degree:
            raise ValidityError(f"a vertex has degree {degrees.max()} > {self.max_degree}")
        object.__setattr__(self, "edges", normalized)

    @classmethod
    def from_edges(cls, vertices: int, edges: Iterable[Tuple[int, int]]) -> "MaxCutGraph":
        """Build with ``max_degree`` set to the actual maximum degree."""
        edges = tuple(edges)
        graph = nx.Graph()
        graph.add_nodes_from(range(vertices))
        graph.add_edges_from(edges)
        degree = max((d for _, d in graph.degree()), default=1)
        return cls(vertices, edges, max(degree, 1))

    @classmethod
    def random_regular(cls, degree: int, vertices: int, seed: int) -> "MaxCutGraph":
        graph = nx.random_regular_graph(degree, vertices, seed=seed)
        return cls(vertices, tuple(graph.edges()), degree)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertices))
        graph.add_edges_from(self.edges)
        return graph

    def cut_sizes(self) -> np.ndarray:
        """Number of cut edges for every assignment."""
        bits = bit_matrix(self.vertices).astype(np.int64)
        cuts = np.zeros(bits.shape[0], dtype=np.int64)
        for i, j in self.edges:
            cuts += bits[:, i] ^ bits[:, j]
        return cuts

    def max_cut(self) -> int:
        return int(self.cut_sizes().max())

    def to_json(self) -> Dict[str, Any]:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges], "max_degree": self.max_degree}


@dataclass(frozen=True, eq=False)
class MaxCutWitness(Witness):
    """``f_G(x) = (1 / (n * Delta)) * #cut edges``, or ``1 - f_G`` when complemented."""

    graph: MaxCutGraph
    complemented: bool = False

    @property
    def width(self) -> int:
        return self.graph.vertices

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.int64)
        n = self.graph.vertices
        cuts = np.zeros(indices.shape, dtype=np.int64)
        for i, j in self.graph.edges:
            cuts += ((indices >> (n - 1 - i)) ^ (indices >> (n - 1 - j))) & 1
        values = cuts / float(n * self.graph.max_degree)
        return 1.0 - values if self.complemented else values

    def to_json(self) -> Dict[str, Any]:
        return {"form": "maxcut", "complemented": self.complemented, "graph": self.graph.to_json()}


@dataclass(frozen=True, eq=False)
class ComplementWitness(Witness):
    """``1 - f`` for an arbitrary witness ``f``."""

    inner: Witness

    @property
    def width(self) -> int:
        return self.inner.width

    @property
    def binary(self) -> bool:
        return self.inner.binary

    @property
    def cost_class(self) -> CostClass:
        return self.inner.cost_class

    def evaluate_many(self, indices: np.ndarray) -> np.ndarray:
        return 1.0 - self.inner.evaluate_many(indices)

    def to_json(self) -> Dict[str, Any]:
        return {"form": "complement", "inner": self.inner.to_json()}


def complement(w: Witness) -> Witness:
    """``1 - w``, folding the sign of parities and the flag of MAXCUT witnesses."""
    if isinstance(w, ParityWitness):
        return ParityWitness(w.width, w.z_mask, -w.sign)
    if isinstance(w, MaxCutWitness):
        return MaxCutWitness(w.graph, not w.complemented)
    if isinstance(w, ComplementWitness):
        return w.inner
    return ComplementWitness(w)


def constant_witness(width: int, value: float) -> TableWitness:
    return TableWitness(width, np.full(1 << width, float(value)), label=f"constant {value:g}")


def evaluate(w: Witness, x: BitString) -> float:
    """Value of ``w`` at a single bit string."""
    if x.width != w.width:
        raise DimensionError(f"bit string width {x.width} != witness width {w.width}")
    return float(w.evaluate_many(np.asarray([x.bits], dtype=np.int64))[0])


def evaluate_samples(w: Witness, samples) -> np.ndarray:
    return w.evaluate_many(as_indices(samples, w.width))


def maxcut_witness(g: MaxCutGraph) -> MaxCutWitness:
    return MaxCutWitness(g)


def heavy_set_witness(reference: DensePmf, theta: Optional[float] = None) -> HeavySetWitness:
    """Indicator of strings whose reference weight is at least ``theta`` (default 2^-n)."""
    theta = 2.0**-reference.width if theta is None else float(theta)
    if theta < 0:
        raise ParameterError(f"theta must be non-negative, got {theta}")
    return HeavySetWitness(reference, theta)


def _discretize(f: Witness, levels: int) -> np.ndarray:
    return np.ceil(f.table() * levels - RANGE_TOL) / levels


def level_set_gaps(f: Witness, nu: DensePmf, levels: int, reference: Optional[DensePmf] = None) -> np.ndarray:
    """Gaps ``nu(F >= k/L) - ref(F >= k/L)`` for k = 1..L with F = ceil(L f)/L."""
    reference = DensePmf.uniform(f.width) if reference is None else reference
    discretized = _discretize(f, levels)
    thresholds = np.arange(1, levels + 1) / levels
    above = discretized[None, :] >= thresholds[:, None] - RANGE_TOL
    return above @ nu.probs - above @ reference.probs


@dataclass(frozen=True)
class BinarizeReport:
    """Outcome of thresholding a witness: the chosen level set and its exact gap."""

    witness: IndicatorWitness
    level: int
    levels: int
    gap: float
    guaranteed_gap: float
    strong_rate: float
    gaps: np.ndarray = field(repr=False)

    @property
    def meets_strong_rate(self) -> bool:
        return self.gap >= self.strong_rate - 1e-12


def binarize_report(
    f: Witness, eps: float, nu: DensePmf, reference: Optional[DensePmf] = None
) -> BinarizeReport:
    """Threshold ``f`` into a binary witness keeping a gap of at least ``eps**2 / 8``.

    ``f`` is rounded up to multiples of ``1/(2m)`` with ``m = ceil(1/eps)`` and every
    level set ``{f >= k/(2m)}`` is scored exactly against ``(nu, reference)``. The level
    set with the largest gap is kept; the report also carries the ``eps**2 / 4`` rate.
    """
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must lie in (0, 1], got {eps}")
    reference = DensePmf.uniform(f.width) if reference is None else reference
    if nu.width != f.width or reference.width != f.width:
        raise DimensionError("witness and reference pmfs must share a width")

    levels = 2 * math.ceil(1.0 / eps - 1e-12)
    gaps = level_set_gaps(f, nu, levels, reference)
    best = int(np.argmax(gaps))
    guaranteed = eps**2 / 8.0
    if gaps[best] < guaranteed - 1e-12:
        raise ReductionFailureError(
            f"best level-set gap {gaps[best]:.3g} is below eps^2/8 = {guaranteed:.3g}; "
            "the input does not separate the pmfs by eps"
        )

    members = _discretize(f, levels) >= (best + 1) / levels - RANGE_TOL
    report = BinarizeReport(
        witness=IndicatorWitness(f.width, members, label=f"level>={best + 1}/{levels}"),
        level=best + 1,
        levels=levels,
        gap=float(gaps[best]),
        guaranteed_gap=guaranteed,
        strong_rate=eps**2 / 4.0,
        gaps=gaps,
    )
    logger.debug(
        f"binarize: threshold {best + 1}/{levels}, gap {report.gap:.4f} "
        f"(eps^2/8 = {guaranteed:.4f}, eps^2/4 = {report.strong_rate:.4f})"
    )
    return report


def binarize(
    f: Witness, eps: float, nu: DensePmf, reference: Optional[DensePmf] = None
) -> Tuple[IndicatorWitness, float]:
    """The best level-set indicator of ``f`` and its guaranteed gap ``eps**2 / 8``."""
    report = binarize_report(f, eps, nu, reference)
    return report.witness, report.guaranteed_gap


def witness_from_json(payload: Dict[str, Any]) -> Witness:
    """Inverse of ``Witness.to_json`` for every form."""
    form = payload["form"]
    if form == "table":
        return TableWitness(payload["width"], np.asarray(payload["values"]), label=payload.get("label", "table"))
    if form == "indicator":
        return IndicatorWitness.of(payload["width"], payload["members"], label=payload.get("label", "indicator"))
    if form == "parity":
        return ParityWitness(payload["width"], payload["z_mask"], payload["sign"])
    if form == "heavy-set":
        return HeavySetWitness(DensePmf.from_json(payload["reference"]), payload["theta"])
    if form == "maxcut":
        graph = payload["graph"]
        g = MaxCutGraph(graph["vertices"], tuple(tuple(e) for e in graph["edges"]), graph["max_degree"])
        return MaxCutWitness(g, payload.get("complemented", False))
    if form == "complement":
        return ComplementWitness(witness_from_json(payload["inner"]))
    raise ValidityError(f"unknown witness form {form!r}")
