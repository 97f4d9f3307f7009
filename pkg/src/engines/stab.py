"""
Stabilizer tableaux for Clifford circuits and the Z-string distinguisher.

A tableau holds the n stabilizer generators of ``C|0...0>`` as bit rows
``(x, z, r)``; x=z=1 on a qubit encodes Y and r=1 a minus sign. Gate updates and the
row product follow the Aaronson-Gottesman conventions.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ParameterError, ValidityError
from .qsim import Circuit, Gate, GateKind
from .rng import CLIFFORD, stream
from .witness import ParityWitness, Witness

logger = logging.getLogger(__name__)

CLIFFORD_NAMES = ("H", "S", "CNOT", "X", "Z")

GateSpec = Union[Gate, Tuple[Any, ...]]


def _f2_rank(matrix: np.ndarray) -> int:
    m = matrix.copy() % 2
    rank = 0
    for col in range(m.shape[1]):
        rows = np.flatnonzero(m[rank:, col]) + rank
        if not rows.size:
            continue
        m[[rank, rows[0]]] = m[[rows[0], rank]]
        others = np.flatnonzero(m[:, col])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


@dataclass(frozen=True, eq=False)
class StabTableau:
    width: int
    x: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.width
        x = np.asarray(self.x, dtype=np.uint8) % 2
        z = np.asarray(self.z, dtype=np.uint8) % 2
        r = np.asarray(self.r, dtype=np.uint8) % 2
        if x.shape != (n, n) or z.shape != (n, n) or r.shape != (n,):
            raise ValidityError(f"tableau blocks do not match width {n}")
        symplectic = (x.astype(np.int64) @ z.T.astype(np.int64) + z.astype(np.int64) @ x.T.astype(np.int64)) % 2
        if np.any(symplectic):
            raise ValidityError("tableau generators do not commute")
        if _f2_rank(np.hstack([x, z])) != n:
            raise ValidityError("tableau generators are not independent")
        for block in (x, z, r):
            block.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "r", r)

    @classmethod
    def zero_state(cls, width: int) -> "StabTableau":
        if width < 1:
            raise ParameterError(f"width must be at least 1, got {width}")
        return cls(width, np.zeros((width, width)), np.eye(width), np.zeros(width))

    def rows(self) -> List[Tuple[int, int, int]]:
        """Generators as ``(x_mask, z_mask, sign)`` with qubit 0 the most significant bit."""
        weights = 1 << np.arange(self.width - 1, -1, -1, dtype=np.int64)
        return [
            (int(self.x[i] @ weights), int(self.z[i] @ weights), -1 if self.r[i] else 1)
            for i in range(self.width)
        ]

    def labels(self) -> List[str]:
        """Pauli strings such as ``+XZI``."""
        letters = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
        return [
            ("-" if self.r[i] else "+")
            + "".join(letters[(int(self.x[i, q]), int(self.z[i, q]))] for q in range(self.width))
            for i in range(self.width)
        ]


@dataclass(frozen=True)
class PauliZString:
    width: int
    z_mask: int
    sign: int = 1

    def __post_init__(self):
        if not 0 < self.z_mask < (1 << self.width):
            raise ValidityError("a Z-string needs a nonzero mask")
        if self.sign not in (1, -1):
            raise ValidityError("sign must be +1 or -1")

    def __str__(self) -> str:
        body = "".join("Z" if (self.z_mask >> (self.width - 1 - q)) & 1 else "I" for q in range(self.width))
        return ("+" if self.sign > 0 else "-") + body


def _as_gate(spec: GateSpec) -> Gate:
    if isinstance(spec, Gate):
        if spec.kind is not GateKind.CLIFFORD or spec.name not in CLIFFORD_NAMES:
            raise ParameterError(f"tableau simulation takes {CLIFFORD_NAMES}, got {spec.kind.value} {spec.name}")
        return spec
    name, *targets = spec
    if str(name).upper() not in CLIFFORD_NAMES:
        raise ParameterError(f"unknown Clifford gate {name!r}")
    return Gate.named(str(name), *targets)


def _phase_g(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Exponent of i picked up per qubit when multiplying Pauli (x1, z1) into (x2, z2)."""
    x1, z1, x2, z2 = (a.astype(np.int64) for a in (x1, z1, x2, z2))
    return np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )


def _rowsum(x: np.ndarray, z: np.ndarray, r: np.ndarray, h: int, i: int) -> None:
    """Replace generator h by the product g_i * g_h, tracking its sign."""
    phase = 2 * int(r[h]) + 2 * int(r[i]) + int(_phase_g(x[i], z[i], x[h], z[h]).sum())
    if phase % 4 not in (0, 2):
        raise ValidityError("row product of non-commuting generators")
    r[h] = 1 if phase % 4 == 2 else 0
    x[h] ^= x[i]
    z[h] ^= z[i]


def _apply_gate(x: np.ndarray, z: np.ndarray, r: np.ndarray, gate: Gate) -> None:
    name, targets = gate.name, gate.targets
    if name == "H":
        a = targets[0]
        r ^= x[:, a] & z[:, a]
        x[:, a], z[:, a] = z[:, a].copy(), x[:, a].copy()
    elif name == "S":
        a = targets[0]
        r ^= x[:, a] & z[:, a]
        z[:, a] ^= x[:, a]
    elif name == "CNOT":
        a, b = targets
        r ^= x[:, a] & z[:, b] & (x[:, b] ^ z[:, a] ^ 1)
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]
    elif name == "X":
        r ^= z[:, targets[0]]
    elif name == "Z":
        r ^= x[:, targets[0]]


def tableau_from_clifford(gates: Sequence[GateSpec], n: int) -> StabTableau:
    """Stabilizer tableau of ``C|0...0>`` for a list of H, S, CNOT, X, Z gates."""
    start = StabTableau.zero_state(n)
    x, z, r = start.x.copy(), start.z.copy(), start.r.copy()
    for spec in gates:
        gate = _as_gate(spec)
        if any(t >= n for t in gate.targets):
            raise ParameterError(f"gate {gate.name} targets {gate.targets} outside {n} qubits")
        _apply_gate(x, z, r, gate)
    return StabTableau(n, x, z, r)


@dataclass(frozen=True, eq=False)
class CliffordTableau:
    """Full tableau of a Clifford unitary C.

    Rows ``0..n-1`` hold ``C X_q C^dagger`` (destabilizers) and rows ``n..2n-1`` hold
    ``C Z_q C^dagger`` (stabilizers), in the same ``(x, z, r)`` bit layout as StabTableau.
    """

    width: int
    x: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.width
        x = np.asarray(self.x, dtype=np.uint8) % 2
        z = np.asarray(self.z, dtype=np.uint8) % 2
        r = np.asarray(self.r, dtype=np.uint8) % 2
        if x.shape != (2 * n, n) or z.shape != (2 * n, n) or r.shape != (2 * n,):
            raise ValidityError(f"Clifford tableau blocks do not match width {n}")
        form = (x.astype(np.int64) @ z.T.astype(np.int64) + z.astype(np.int64) @ x.T.astype(np.int64)) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[:n, n:] = np.eye(n, dtype=np.int64)
        expected[n:, :n] = np.eye(n, dtype=np.int64)
        if not np.array_equal(form, expected):
            raise ValidityError("Clifford tableau rows do not form a symplectic basis")
        for block in (x, z, r):
            block.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "r", r)

    def stabilizers(self) -> StabTableau:
        """Tableau of ``C|0...0>``."""
        n = self.width
        return StabTableau(n, self.x[n:], self.z[n:], self.r[n:])


def _symplectic_form(a: np.ndarray, b: np.ndarray, n: int) -> int:
    return int((a[:n] @ b[n:] + a[n:] @ b[:n]) % 2)


def _project_to_complement(v: np.ndarray, pairs: List[Tuple[np.ndarray, np.ndarray]], n: int) -> np.ndarray:
    """Symplectic Gram-Schmidt: remove the components of v along the chosen pairs."""
    v = v.copy()
    for d, s in pairs:
        if _symplectic_form(v, s, n):
            v ^= d
        if _symplectic_form(v, d, n):
            v ^= s
    return v


def sample_clifford_tableau(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Uniformly random Clifford unitary on n qubits, modulo global phase.

    The rows are built as a random symplectic basis ``(d_0, s_0), (d_1, s_1), ...``: each
    d is a uniform nonzero vector of the symplectic complement of the earlier pairs and
    each s a uniform vector of that complement with ``<d, s> = 1``. Every symplectic matrix
    arises from exactly one such sequence; the 2n signs are independent fair bits.
    """
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    pairs: List[Tuple[np.ndarray, np.ndarray]] = []
    for _ in range(n):
        while True:
            d = _project_to_complement(rng.integers(0, 2, size=2 * n, dtype=np.uint8), pairs, n)
            if d.any():
                break
        while True:
            s = _project_to_complement(rng.integers(0, 2, size=2 * n, dtype=np.uint8), pairs, n)
            if _symplectic_form(d, s, n):
                break
        pairs.append((d, s))
    rows = np.array([d for d, _ in pairs] + [s for _, s in pairs], dtype=np.uint8)
    signs = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
    return CliffordTableau(n, rows[:, :n], rows[:, n:], signs)


def _reduce_to_identity(t: CliffordTableau) -> List[Gate]:
    """Gates g_1..g_k, in time order, with ``g_k ... g_1 C`` equal to the identity up to phase.

    Qubit by qubit, the stabilizer row is cleared to ``Z_q`` and then the destabilizer row
    to ``X_q`` using gates that fix ``Z_q``; signs are fixed last with X and Z.
    """
    n = t.width
    x, z, r = t.x.copy(), t.z.copy(), t.r.copy()
    ops: List[Gate] = []

    def apply(name: str, *targets: int) -> None:
        gate = Gate.named(name, *targets)
        _apply_gate(x, z, r, gate)
        ops.append(gate)

    for q in range(n):
        s, d = n + q, q
        for j in range(q, n):
            if x[s, j]:
                if z[s, j]:
                    apply("S", j)
                apply("H", j)
        if not z[s, q]:
            j = q + 1 + int(np.flatnonzero(z[s, q + 1 :])[0])
            apply("CNOT", q, j)
        for j in range(q + 1, n):
            if z[s, j]:
                apply("CNOT", j, q)

        if z[d, q]:
            apply("S", q)
        for j in range(q + 1, n):
            if x[d, j] or z[d, j]:
                if z[d, j]:
                    apply("S" if x[d, j] else "H", j)
                apply("CNOT", q, j)

    for q in range(n):
        if r[q]:
            apply("Z", q)
        if r[n + q]:
            apply("X", q)

    identity = np.eye(n, dtype=np.uint8)
    if (
        np.any(r)
        or not np.array_equal(x[:n], identity)
        or not np.array_equal(z[n:], identity)
        or np.any(x[n:])
        or np.any(z[:n])
    ):
        raise ValidityError("Clifford synthesis did not reach the identity")
    return ops


def clifford_gates(t: CliffordTableau) -> List[Gate]:
    """H, S, CNOT, X and Z gates implementing the Clifford of ``t`` (S^dagger is written as S S S)."""
    gates: List[Gate] = []
    for gate in reversed(_reduce_to_identity(t)):
        gates.extend([gate] * 3 if gate.name == "S" else [gate])
    return gates


def random_clifford(n: int, seed: int, key: Tuple[int, ...] = ()) -> List[Gate]:
    """Gate list of a uniformly random n-qubit Clifford, seeded by ``(seed, key)``."""
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    gates = clifford_gates(sample_clifford_tableau(n, stream(seed, CLIFFORD, n, *key)))
    logger.debug(f"random Clifford on {n} qubits: {len(gates)} gates")
    return gates


def clifford_circuit(gates: Sequence[GateSpec], n: int, seed: Optional[int] = None) -> Circuit:
    """The same gate list as a qsim circuit, one gate per layer."""
    return Circuit.from_gates(n, [_as_gate(g) for g in gates], seed)


def find_z_string(t: StabTableau) -> Optional[PauliZString]:
    """Smallest-mask Z-only element of the stabilizer group, with its sign.

    The X-block is row-reduced with sign-tracked row products; rows left with no X part
    span the Z-subgroup. Their Z parts are then reduced with pivots on qubit 0 first, so the
    row with the last pivot carries the lexicographically smallest mask.
    """
    n = t.width
    x, z, r = t.x.copy(), t.z.copy(), t.r.copy()
    pivot_row = 0
    for col in range(n):
        candidates = np.flatnonzero(x[pivot_row:, col]) + pivot_row
        if not candidates.size:
            continue
        _swap(x, z, r, pivot_row, int(candidates[0]))
        for other in np.flatnonzero(x[:, col]):
            if other != pivot_row:
                _rowsum(x, z, r, int(other), pivot_row)
        pivot_row += 1
    z_rows = list(range(pivot_row, n))
    if not z_rows:
        logger.debug("no Z-string in the stabilizer group")
        return None

    top = pivot_row
    last = None
    for col in range(n):
        candidates = np.flatnonzero(z[top:, col]) + top
        if not candidates.size:
            continue
        _swap(x, z, r, top, int(candidates[0]))
        for other in z_rows:
            if other != top and z[other, col]:
                _rowsum(x, z, r, other, top)
        last = top
        top += 1
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return PauliZString(n, int(z[last] @ weights), -1 if r[last] else 1)


def _swap(x: np.ndarray, z: np.ndarray, r: np.ndarray, a: int, b: int) -> None:
    if a != b:
        x[[a, b]] = x[[b, a]]
        z[[a, b]] = z[[b, a]]
        r[[a, b]] = r[[b, a]]


def z_string_witness(p: PauliZString) -> Witness:
    """``f = (1 + sign (-1)^<z, x>) / 2``: one on outcomes the stabilizer allows."""
    return ParityWitness(p.width, p.z_mask, p.sign)
