import numpy as np
import pytest

from src.engines import (
    DensePmf,
    IndicatorWitness,
    complement,
    heavy_set_witness,
    output_distribution,
    random_brickwork,
    sample_schedule,
    stream,
    verify_claim,
    verify_exact,
)
from src.errors import ParameterError, ProtocolError
from src.models import sample_hash


def test_sample_schedule():
    assert sample_schedule(1, 1.0, 1 / 3) == 4
    assert sample_schedule(2, 0.5, 0.1) > sample_schedule(1, 0.5, 0.1)
    with pytest.raises(ParameterError):
        sample_schedule(0, 0.5, 0.1)
    with pytest.raises(ParameterError):
        sample_schedule(1, 0.5, 1.0)


def test_verify_claim_threshold_is_half_eps():
    f = IndicatorWitness.of(2, [3])
    check = verify_claim([0, 0, 0, 0], [3, 3, 0, 0], f, eps=1.0)
    assert check.empirical_gap == pytest.approx(0.5)
    assert check.accepted
    assert not verify_claim([0, 0, 0, 0], [3, 0, 0, 0], f, eps=1.0).accepted


def test_verify_claim_rejects_mismatched_batches():
    f = IndicatorWitness.of(2, [3])
    with pytest.raises(ProtocolError):
        verify_claim([0, 1], [3], f, eps=0.5)
    with pytest.raises(ProtocolError):
        verify_claim([], [], f, eps=0.5)
    with pytest.raises(ProtocolError):
        verify_claim([0, 1], [2, 3], f, eps=0.5, expected=3)


def test_verify_exact():
    nu = DensePmf.point_mass(2, 0)
    mu = DensePmf.uniform(2)
    check = verify_exact(mu, nu, complement(IndicatorWitness.of(2, [0])), eps=0.5)
    assert check.empirical_gap == pytest.approx(0.75)
    assert check.accepted


def _acceptance_rate(high: DensePmf, low: DensePmf, f, eps: float, delta: float, repetitions: int) -> float:
    count = sample_schedule(1, eps, delta)
    accepted = 0
    for rep in range(repetitions):
        bob = low.sample(count, stream(rep, 1, 0))
        alice = high.sample(count, stream(rep, 1, 1))
        accepted += verify_claim(bob, alice, f, eps, expected=count).accepted
    return accepted / repetitions


def test_referee_calibration():
    eps, delta = 0.3, 0.1
    low = DensePmf.uniform(8)
    f = IndicatorWitness.of(8, range(128))
    high = DensePmf.from_weights(np.where(f.table() > 0, 0.8 / 128, 0.2 / 128))
    assert f.gap(high, low) == pytest.approx(eps)
    assert _acceptance_rate(high, low, f, eps, delta, 300) >= 1 - delta
    assert _acceptance_rate(low, low, f, eps, delta, 300) <= delta


def test_heavy_set_claim_on_random_circuit_is_accepted():
    nu = output_distribution(random_brickwork(8, 16, seed=1))
    uniform = DensePmf.uniform(8)
    f = complement(heavy_set_witness(nu))
    assert f.gap(uniform, nu) > 0.2
    assert _acceptance_rate(uniform, nu, f, 0.2, 0.1, 50) >= 0.9


def test_samples_hash_stably():
    a = sample_hash(np.array([1, 2, 3]))
    assert a == sample_hash([1, 2, 3])
    assert a != sample_hash(np.array([3, 2, 1]))
