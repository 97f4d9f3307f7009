import functools
import math

import numpy as np
import pytest

from src.engines import (
    Circuit,
    DensityMatrix,
    Gate,
    NoiseSpec,
    StateVector,
    depolarize,
    entropy_lower_bound,
    haar_moment_diagnostic,
    noisy_output_distribution,
    output_distribution,
    random_brickwork,
    random_density_matrix,
    run_statevector,
    stream,
    von_neumann_entropy,
)
from src.engines.qsim import GateKind, haar_unitary, noisy_output_state
from src.errors import CapacityError, ParameterError, ValidityError

I2 = np.eye(2)


def _embed(matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Full 2^n operator of a gate on adjacent ascending targets, qubit 0 most significant."""
    first = targets[0]
    k = len(targets)
    assert list(targets) == list(range(first, first + k))
    return functools.reduce(np.kron, [np.eye(1 << first), matrix, np.eye(1 << (n - first - k))])


def _dense_state(c: Circuit) -> np.ndarray:
    psi = np.zeros(1 << c.width, dtype=complex)
    psi[0] = 1.0
    for layer in c.layers:
        for gate in layer:
            psi = _embed(gate.matrix, gate.targets, c.width) @ psi
    return psi


def test_gate_validation():
    with pytest.raises(ValidityError):
        Gate(GateKind.ONE_QUBIT, (0,), np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValidityError):
        Gate.named("CNOT", 1, 1)
    with pytest.raises(ParameterError):
        Gate.named("T", 0)


def test_circuit_rejects_overlapping_layers():
    with pytest.raises(ValidityError):
        Circuit(2, ((Gate.named("H", 0), Gate.named("CNOT", 0, 1)),))
    with pytest.raises(ValidityError):
        Circuit(2, ((Gate.named("H", 2),),))


def test_empty_circuit_outputs_zero_string():
    nu = output_distribution(Circuit.identity(3))
    assert nu.probs[0] == pytest.approx(1.0)


def test_hadamard_wall_is_uniform():
    nu = output_distribution(Circuit.hadamard_wall(4))
    assert np.allclose(nu.probs, 1 / 16)


def test_big_endian_ordering():
    nu = output_distribution(Circuit(3, ((Gate.named("X", 0),),)))
    assert nu.probs[0b100] == pytest.approx(1.0)


def test_bell_state():
    c = Circuit.from_gates(2, [Gate.named("H", 0), Gate.named("CNOT", 0, 1)])
    assert np.allclose(output_distribution(c).probs, [0.5, 0, 0, 0.5])


def test_brickwork_matches_dense_oracle():
    c = random_brickwork(6, 8, seed=11)
    state = run_statevector(c)
    assert np.allclose(state.amps, _dense_state(c), atol=1e-12)
    assert np.allclose(output_distribution(c).probs, np.abs(_dense_state(c)) ** 2, atol=1e-12)
    assert np.vdot(state.amps, state.amps).real == pytest.approx(1.0, abs=1e-9)


def test_brickwork_is_seeded():
    a = random_brickwork(4, 3, seed=1)
    b = random_brickwork(4, 3, seed=1)
    c = random_brickwork(4, 3, seed=1, key=(5,))
    assert np.allclose(output_distribution(a).probs, output_distribution(b).probs)
    assert not np.allclose(output_distribution(a).probs, output_distribution(c).probs)
    assert [len(layer) for layer in a.layers] == [2, 1, 2]


def test_circuit_json_round_trip():
    c = random_brickwork(4, 3, seed=2)
    restored = Circuit.from_json(c.to_json())
    assert np.allclose(output_distribution(restored).probs, output_distribution(c).probs)


def test_haar_unitary_is_unitary(rng):
    u = haar_unitary(4, rng)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    assert np.array_equal(haar_unitary(4, stream(3, 1)), haar_unitary(4, stream(3, 1)))


def test_haar_unitary_entry_moments():
    rng = stream(3, 2)
    entries = np.array([abs(haar_unitary(4, rng)[0, 0]) ** 2 for _ in range(4000)])
    assert entries.mean() == pytest.approx(1 / 4, abs=0.01)
    assert (entries**2).mean() == pytest.approx(2 / (4 * 5), abs=0.01)


def test_state_and_density_validation():
    with pytest.raises(ValidityError):
        StateVector(1, np.array([1.0, 1.0]))
    with pytest.raises(ValidityError):
        DensityMatrix(1, np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ValidityError):
        DensityMatrix(1, np.array([[1.5, 0], [0, -0.5]]))
    with pytest.raises(CapacityError):
        DensityMatrix.maximally_mixed(11)


def _single_qubit_depolarizer(p: float) -> np.ndarray:
    """Superoperator of rho -> (1-p) rho + p tr(rho) I/2 on a row-major vectorized 2x2 matrix."""
    identity = np.eye(4)
    trace_to_mixed = 0.5 * np.outer(np.eye(2).reshape(-1), np.eye(2).reshape(-1))
    return (1 - p) * identity + p * trace_to_mixed


def _superoperator_oracle(c: Circuit, p: float) -> np.ndarray:
    """Noisy evolution of |0><0| through explicit 4^n x 4^n superoperators."""
    n = c.width
    dim = 1 << n
    # row-major vec(A rho B) = (A kron B^T) vec(rho); depolarizing acts on each (row, col) qubit pair
    one = _single_qubit_depolarizer(p).reshape(2, 2, 2, 2)
    noise = np.eye(dim * dim).reshape((2,) * (4 * n))
    for q in range(n):
        noise = np.tensordot(one, noise, axes=([2, 3], [q, q + n]))
        noise = np.moveaxis(noise, [0, 1], [q, q + n])
    noise = noise.reshape(dim * dim, dim * dim)

    rho = np.zeros(dim * dim, dtype=complex)
    rho[0] = 1.0
    rho = noise @ rho
    for layer in c.layers:
        u = np.eye(dim, dtype=complex)
        for gate in layer:
            u = _embed(gate.matrix, gate.targets, n) @ u
        rho = np.kron(u, u.conj()) @ rho
        rho = noise @ rho
    return rho.reshape(dim, dim)


def test_noisy_evolution_matches_superoperator_oracle():
    c = random_brickwork(4, 3, seed=9)
    state = noisy_output_state(c, NoiseSpec(0.1))
    assert np.allclose(state.entries, _superoperator_oracle(c, 0.1), atol=1e-12)
    nu = noisy_output_distribution(c, NoiseSpec(0.1))
    assert np.allclose(nu.probs, np.diag(state.entries).real, atol=1e-12)


def test_noiseless_density_evolution_matches_statevector():
    c = random_brickwork(4, 4, seed=3)
    nu = noisy_output_distribution(c, NoiseSpec(0.0))
    assert np.allclose(nu.probs, output_distribution(c).probs, atol=1e-12)


def test_full_depolarizing_gives_uniform():
    nu = noisy_output_distribution(random_brickwork(3, 2, seed=4), NoiseSpec(1.0))
    assert np.allclose(nu.probs, 1 / 8)


def test_layer_mask_switches_noise_off():
    c = random_brickwork(3, 2, seed=4)
    silent = NoiseSpec(0.5, layer_mask=(False, False, False))
    assert np.allclose(noisy_output_distribution(c, silent).probs, output_distribution(c).probs)


def test_depolarize_two_qubits_matches_eigen_oracle():
    zero = np.zeros((4, 4))
    zero[0, 0] = 1.0
    rho = depolarize(DensityMatrix(2, zero), 0.5)
    # each qubit: |0><0| -> diag(3/4, 1/4), product state
    single = np.array([0.75, 0.25])
    expected = np.sort(np.kron(single, single))
    assert np.allclose(np.sort(np.linalg.eigvalsh(rho.entries)), expected)
    assert von_neumann_entropy(rho) == pytest.approx(-2 * (0.75 * math.log(0.75) + 0.25 * math.log(0.25)))


def test_depolarize_selected_qubit_only():
    zero = np.zeros((4, 4))
    zero[0, 0] = 1.0
    rho = depolarize(DensityMatrix(2, zero), 1.0, qubits=[1])
    assert np.allclose(np.diag(rho.entries).real, [0.5, 0.5, 0, 0])


def test_random_density_matrix_ranks(rng):
    pure = random_density_matrix(2, rng, rank=1)
    assert von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-9)
    mixed = random_density_matrix(2, rng)
    assert 0 < von_neumann_entropy(mixed) <= 2 * math.log(2) + 1e-12
    with pytest.raises(ParameterError):
        random_density_matrix(2, rng, rank=5)


def test_moment_diagnostic_edge_cases():
    shallow = haar_moment_diagnostic(3, 0, 4, seed=0)
    assert shallow.mean_collision == pytest.approx(1.0)
    assert shallow.mean_p == pytest.approx(1.0)
    wall = haar_moment_diagnostic(3, 0, 1, seed=0, circuit_factory=lambda i: Circuit.hadamard_wall(3))
    assert wall.mean_collision == pytest.approx(1 / 8)


def test_moment_diagnostic_threads_do_not_change_results():
    serial = haar_moment_diagnostic(4, 6, 12, seed=5, threads=1)
    parallel = haar_moment_diagnostic(4, 6, 12, seed=5, threads=4)
    assert serial.mean_collision == parallel.mean_collision
    assert serial.haar_collision == pytest.approx(2 / 17)


def test_moment_diagnostic_approaches_the_haar_collision_with_depth():
    n = 4
    reports = [haar_moment_diagnostic(n, depth, 200, seed=8) for depth in (1, 2, 4, 12)]
    excess = [r.mean_collision - r.haar_collision for r in reports]
    errors = [r.collision_stderr for r in reports]

    assert excess[0] > 5 * errors[0]
    for (a, ea), (b, eb) in zip(zip(excess, errors), zip(excess[1:], errors[1:])):
        assert b <= a + 3 * (ea + eb)
    assert abs(excess[-1]) <= 4 * errors[-1] + 0.005


def test_moment_diagnostic_capacity():
    with pytest.raises(CapacityError):
        haar_moment_diagnostic(13, 1, 1, seed=0)


def test_entropy_lower_bound():
    assert entropy_lower_bound(8, 0.1) == pytest.approx(8 * math.log(2) - math.log(3) + math.log(0.1))
    with pytest.raises(ParameterError):
        entropy_lower_bound(8, 0.0)


def test_streams_are_independent_by_key():
    a = stream(1, 2, 3).random(4)
    b = stream(1, 2, 4).random(4)
    assert not np.allclose(a, b)
    assert np.array_equal(a, stream(1, 2, 3).random(4))
