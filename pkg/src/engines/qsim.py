"""
Exact small-n quantum simulation.

Statevectors and density matrices are held as rank-n (resp. rank-2n) tensors with one
axis per qubit, qubit 0 first, so a C-order reshape to a flat vector matches the
big-endian bit-string indexing used by ``distcore``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group

from ..errors import CapacityError, ParameterError, ValidityError
from .distcore import LN2, NORMALIZATION_TOL, DensePmf, check_width, collision_probability
from .rng import BRICKWORK, stream

logger = logging.getLogger(__name__)

DENSITY_CAP = 10
MOMENT_CAP = 12
UNITARY_TOL = 1e-10
EIGEN_FLOOR = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)

NAMED_GATES: Dict[str, np.ndarray] = {
    "H": np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    # control is the first target
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


class GateKind(str, Enum):
    ONE_QUBIT = "one-qubit"
    TWO_QUBIT = "two-qubit"
    CLIFFORD = "clifford"


@dataclass(frozen=True, eq=False)
class Gate:
    kind: GateKind
    targets: Tuple[int, ...]
    matrix: Optional[np.ndarray] = field(default=None, repr=False)
    name: Optional[str] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(set(targets)) != len(targets):
            raise ValidityError(f"gate targets repeat a qubit: {targets}")
        if kind is GateKind.CLIFFORD:
            if self.name not in NAMED_GATES:
                raise ParameterError(f"unknown Clifford gate {self.name!r}")
            matrix = NAMED_GATES[self.name]
        else:
            if self.matrix is None:
                raise ValidityError(f"{kind.value} gate needs a matrix")
            matrix = np.asarray(self.matrix, dtype=complex)
        arity = {GateKind.ONE_QUBIT: 1, GateKind.TWO_QUBIT: 2}.get(kind, int(round(math.log2(matrix.shape[0]))))
        if len(targets) != arity or matrix.shape != (1 << arity, 1 << arity):
            raise ValidityError(f"{kind.value} gate has {len(targets)} targets and a {matrix.shape} matrix")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(1 << arity), atol=UNITARY_TOL, rtol=0):
            raise ValidityError("gate matrix is not unitary")
        matrix = matrix.copy()
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def named(cls, name: str, *targets: int) -> "Gate":
        return cls(GateKind.CLIFFORD, targets, name=name.upper())

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind.value, "targets": list(self.targets)}
        if self.kind is GateKind.CLIFFORD:
            payload["name"] = self.name
        else:
            payload["matrix"] = [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix]
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Gate":
        matrix = None
        if "matrix" in payload:
            matrix = np.array([[complex(re, im) for re, im in row] for row in payload["matrix"]])
        return cls(GateKind(payload["kind"]), tuple(payload["targets"]), matrix, payload.get("name"))


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate layers on ``width`` qubits; targets within a layer are disjoint."""

    width: int
    layers: Tuple[Tuple[Gate, ...], ...] = ()
    seed: Optional[int] = None

    def __post_init__(self):
        if self.width < 1:
            raise ParameterError(f"circuit width must be at least 1, got {self.width}")
        layers = tuple(tuple(layer) for layer in self.layers)
        for depth, layer in enumerate(layers):
            used = [t for gate in layer for t in gate.targets]
            if any(t < 0 or t >= self.width for t in used):
                raise ValidityError(f"layer {depth} targets a qubit outside 0..{self.width - 1}")
            if len(set(used)) != len(used):
                raise ValidityError(f"layer {depth} has overlapping targets")
        object.__setattr__(self, "layers", layers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @classmethod
    def identity(cls, width: int) -> "Circuit":
        return cls(width)

    @classmethod
    def from_gates(cls, width: int, gates: Sequence[Gate], seed: Optional[int] = None) -> "Circuit":
        """One gate per layer, in order."""
        return cls(width, tuple((gate,) for gate in gates), seed)

    @classmethod
    def hadamard_wall(cls, width: int) -> "Circuit":
        return cls(width, (tuple(Gate.named("H", q) for q in range(width)),))

    def to_json(self) -> Dict[str, Any]:
        return {
            "width": self.width,
            "seed": self.seed,
            "layers": [[gate.to_json() for gate in layer] for layer in self.layers],
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Circuit":
        layers = tuple(tuple(Gate.from_json(g) for g in layer) for layer in payload["layers"])
        return cls(int(payload["width"]), layers, payload.get("seed"))


@dataclass(frozen=True, eq=False)
class StateVector:
    width: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.shape != (1 << self.width,):
            raise ValidityError(f"expected {1 << self.width} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise ValidityError(f"statevector norm^2 is {norm!r}")
        object.__setattr__(self, "amps", amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    width: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_width(self.width, DENSITY_CAP)
        dim = 1 << self.width
        entries = np.asarray(self.entries, dtype=complex).reshape(dim, dim)
        if not np.allclose(entries, entries.conj().T, atol=UNITARY_TOL, rtol=0):
            raise ValidityError("density matrix is not Hermitian")
        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > NORMALIZATION_TOL:
            raise ValidityError(f"density matrix trace is {trace!r}")
        if np.linalg.eigvalsh(entries).min() < -NORMALIZATION_TOL:
            raise ValidityError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def pure(cls, state: StateVector) -> "DensityMatrix":
        return cls(state.width, np.outer(state.amps, state.amps.conj()))

    @classmethod
    def maximally_mixed(cls, width: int) -> "DensityMatrix":
        check_width(width, DENSITY_CAP)
        return cls(width, np.eye(1 << width) / (1 << width))

    def diagonal(self) -> np.ndarray:
        return np.clip(np.diag(self.entries).real, 0.0, None)


@dataclass(frozen=True)
class NoiseSpec:
    """Local depolarizing noise; ``layer_mask`` switches the D+1 noise layers on or off."""

    p: float
    kind: str = "local-depolarizing"
    layer_mask: Optional[Tuple[bool, ...]] = None

    def __post_init__(self):
        if self.kind != "local-depolarizing":
            raise ParameterError(f"unsupported noise kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"noise rate must lie in [0, 1], got {self.p}")

    def active(self, layer: int) -> bool:
        if self.layer_mask is None:
            return True
        return bool(self.layer_mask[layer]) if layer < len(self.layer_mask) else True


@dataclass(frozen=True)
class MomentDiagnostic:
    mean_p: float
    mean_collision: float
    collision_stderr: float
    haar_collision: float
    ensemble_size: int


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``dim x dim`` unitary drawn from ``rng``."""
    return unitary_group.rvs(dim, random_state=rng)


def _apply(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def _apply_layer_to_state(tensor: np.ndarray, layer: Sequence[Gate]) -> np.ndarray:
    for gate in layer:
        tensor = _apply(tensor, gate.matrix, gate.targets)
    return tensor


def _apply_layer_to_density(tensor: np.ndarray, layer: Sequence[Gate], width: int) -> np.ndarray:
    for gate in layer:
        tensor = _apply(tensor, gate.matrix, gate.targets)
        tensor = _apply(tensor, gate.matrix.conj(), [t + width for t in gate.targets])
    return tensor


def _depolarize_tensor(tensor: np.ndarray, width: int, p: float, qubits: Sequence[int]) -> np.ndarray:
    if p == 0.0:
        return tensor
    for q in qubits:
        def at(a: int, b: int) -> Tuple:
            index: List[Any] = [slice(None)] * (2 * width)
            index[q], index[q + width] = a, b
            return tuple(index)

        average = 0.5 * (tensor[at(0, 0)] + tensor[at(1, 1)])
        tensor = (1.0 - p) * tensor
        tensor[at(0, 0)] += p * average
        tensor[at(1, 1)] += p * average
    return tensor


def run_statevector(c: Circuit) -> StateVector:
    """``C|0...0>``."""
    check_width(c.width)
    tensor = np.zeros((2,) * c.width, dtype=complex)
    tensor[(0,) * c.width] = 1.0
    for layer in c.layers:
        tensor = _apply_layer_to_state(tensor, layer)
    return StateVector(c.width, tensor.reshape(-1))


def output_distribution(c: Circuit) -> DensePmf:
    probs = run_statevector(c).probabilities()
    return DensePmf(c.width, probs / probs.sum())


def random_brickwork(n: int, depth: int, seed: int, key: Tuple[int, ...] = ()) -> Circuit:
    """Brickwork of Haar two-qubit gates on pairs (q, q+1), even pairs on even layers."""
    if n < 2:
        raise ParameterError(f"brickwork needs at least 2 qubits, got {n}")
    if depth < 0:
        raise ParameterError(f"depth must be non-negative, got {depth}")
    rng = stream(seed, BRICKWORK, n, *key)
    layers = []
    for layer in range(depth):
        layers.append(
            tuple(
                Gate(GateKind.TWO_QUBIT, (q, q + 1), haar_unitary(4, rng))
                for q in range(layer % 2, n - 1, 2)
            )
        )
    return Circuit(n, tuple(layers), seed)


def depolarize(rho: DensityMatrix, p: float, qubits: Optional[Sequence[int]] = None) -> DensityMatrix:
    """``rho -> (1-p) rho + p (I/2 (x) tr_q rho)`` on each listed qubit (all by default)."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"noise rate must lie in [0, 1], got {p}")
    n = rho.width
    qubits = range(n) if qubits is None else qubits
    tensor = _depolarize_tensor(rho.entries.reshape((2,) * (2 * n)).copy(), n, p, qubits)
    dim = 1 << n
    return DensityMatrix(n, tensor.reshape(dim, dim))


def _noisy_tensor(c: Circuit, noise: NoiseSpec) -> np.ndarray:
    if c.width > DENSITY_CAP:
        raise CapacityError(f"density-matrix simulation is capped at {DENSITY_CAP} qubits, got {c.width}")
    n = c.width
    tensor = np.zeros((2,) * (2 * n), dtype=complex)
    tensor[(0,) * (2 * n)] = 1.0
    for depth, layer in enumerate(c.layers):
        if noise.active(depth):
            tensor = _depolarize_tensor(tensor, n, noise.p, range(n))
        tensor = _apply_layer_to_density(tensor, layer, n)
    if noise.active(c.depth):
        tensor = _depolarize_tensor(tensor, n, noise.p, range(n))
    return tensor


def noisy_output_state(c: Circuit, noise: NoiseSpec) -> DensityMatrix:
    """``Phi, U_1, Phi, ..., U_D, Phi`` applied to ``|0><0|``."""
    dim = 1 << c.width
    return DensityMatrix(c.width, _noisy_tensor(c, noise).reshape(dim, dim))


def noisy_output_distribution(c: Circuit, noise: NoiseSpec) -> DensePmf:
    dim = 1 << c.width
    diagonal = np.clip(np.diagonal(_noisy_tensor(c, noise).reshape(dim, dim)).real, 0.0, None)
    return DensePmf.from_weights(diagonal)


def _moments(c: Circuit) -> Tuple[float, float]:
    nu = output_distribution(c)
    return float(nu.probs[0]), collision_probability(nu)


def haar_moment_diagnostic(
    n: int,
    depth: int,
    ensemble_size: int,
    seed: int,
    threads: int = 1,
    circuit_factory: Optional[Callable[[int], Circuit]] = None,
) -> MomentDiagnostic:
    """Ensemble means of ``nu(0^n)`` and ``sum nu(x)^2`` over sampled circuits.

    Haar values are ``2^-n`` and ``2 / (2^n + 1)``. Circuit ``i`` is drawn from key ``(i,)``
    unless ``circuit_factory`` supplies the ensemble.
    """
    if n > MOMENT_CAP:
        raise CapacityError(f"moment diagnostics are capped at {MOMENT_CAP} qubits, got {n}")
    if ensemble_size < 1:
        raise ParameterError("ensemble_size must be at least 1")
    factory = circuit_factory or (lambda i: random_brickwork(n, depth, seed, (i,)))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(lambda i: _moments(factory(i)), range(ensemble_size)))
    p0 = np.array([r[0] for r in results])
    collisions = np.array([r[1] for r in results])
    stderr = float(collisions.std(ddof=1) / math.sqrt(ensemble_size)) if ensemble_size > 1 else 0.0
    report = MomentDiagnostic(
        mean_p=float(p0.mean()),
        mean_collision=float(collisions.mean()),
        collision_stderr=stderr,
        haar_collision=2.0 / ((1 << n) + 1),
        ensemble_size=ensemble_size,
    )
    logger.info(
        f"🎲 n={n} depth={depth}: mean collision {report.mean_collision:.6g} "
        f"(Haar {report.haar_collision:.6g}, stderr {stderr:.2g})"
    )
    return report


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``-sum lambda ln lambda`` in nats."""
    entries = np.asarray(rho.entries)
    if not np.allclose(entries, entries.conj().T, atol=UNITARY_TOL, rtol=0):
        raise ValidityError("density matrix is not Hermitian")
    eigenvalues = np.linalg.eigvalsh(entries)
    eigenvalues = eigenvalues[eigenvalues >= EIGEN_FLOOR]
    return float(-(eigenvalues * np.log(eigenvalues)).sum())


def random_density_matrix(n: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Hilbert-Schmidt random state of the given rank; ``rank=1`` is a Haar-random pure state."""
    check_width(n, DENSITY_CAP)
    dim = 1 << n
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ParameterError(f"rank must lie in 1..{dim}, got {rank}")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(n, rho / np.trace(rho).real)


def entropy_lower_bound(n: int, delta: float) -> float:
    """``n ln 2 - ln 3 + ln delta``: S(nu) exceeds this with probability 1 - delta over a 2-design."""
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return n * LN2 - math.log(3.0) + math.log(delta)
