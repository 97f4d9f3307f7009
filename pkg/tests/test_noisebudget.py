import math

import pytest

from src.engines import (
    NoiseSpec,
    SdpiSpec,
    depolarizing_alpha,
    depth_prefixes,
    entropy_budget,
    iteration_bound,
    noise_grid,
    noisy_chain_check,
    random_brickwork,
    sampling_cost_bound,
    stream,
    verify_sdpi,
)
from src.engines.noisebudget import annealing_beta, budget_report, example_beta
from src.errors import CapacityError, ParameterError


def test_depolarizing_alpha():
    assert depolarizing_alpha(0.1) == pytest.approx(0.19)
    assert depolarizing_alpha(0.0) == 0.0
    assert depolarizing_alpha(1.0) == 1.0
    assert SdpiSpec.depolarizing(0.3).alpha == pytest.approx(0.51)
    with pytest.raises(ParameterError):
        SdpiSpec(0.5, "depolarizing", 0.1)


def test_budget_and_iteration_bound():
    alpha = depolarizing_alpha(0.2)
    budget = entropy_budget(10, 4, alpha)
    assert budget == pytest.approx(0.8**10 * 10 * math.log(2))
    assert iteration_bound(0.5, budget) == 48


def test_budget_report_in_bits():
    report = budget_report(4, 0, SdpiSpec(0.0), 0.5)
    assert report.entropy_budget_bits == pytest.approx(4.0)
    assert report.iteration_bound == math.ceil(64 * 4 * math.log(2) - 1e-9)


def test_sampling_cost_bound_overflows_to_infinity():
    assert sampling_cost_bound(0.5, 1.0) == pytest.approx(math.exp(8.0))
    assert sampling_cost_bound(1e-3, 1e3) == math.inf


def test_annealing_temperatures():
    budget = entropy_budget(6, 2, depolarizing_alpha(0.1))
    assert annealing_beta(0.25, budget) == pytest.approx(16 * budget)
    assert example_beta(0.5, 6, 2, 0.1) == pytest.approx(0.9**6 * 6 / 0.5)


@pytest.mark.parametrize("p", [0.1, 0.3])
def test_sdpi_contraction(p):
    report = verify_sdpi(NoiseSpec(p), 2, 200, stream(3, 7))
    assert report.holds
    assert 0.0 < report.worst_ratio <= 1.0 - depolarizing_alpha(p) + 1e-9


def test_sdpi_capacity():
    with pytest.raises(CapacityError):
        verify_sdpi(NoiseSpec(0.1), 5, 1, stream(0))


def test_noisy_chain_stays_within_budget():
    for depth in range(1, 4):
        chain = noisy_chain_check(random_brickwork(4, depth, seed=depth), NoiseSpec(0.1), 0.3)
        assert chain.holds
        assert chain.noisy_round_cap <= chain.noiseless_round_cap


def test_full_noise_leaves_no_divergence():
    chain = noisy_chain_check(random_brickwork(3, 2, seed=0), NoiseSpec(1.0), 0.3)
    assert chain.divergence == pytest.approx(0.0, abs=1e-12)
    assert chain.budget == 0.0


def test_noise_grid_is_complete_and_thread_independent():
    serial = noise_grid(4, [1, 2], [0.05, 0.2], 0.3, seed=1)
    parallel = noise_grid(4, [1, 2], [0.05, 0.2], 0.3, seed=1, threads=3)
    assert len(serial) == 4
    assert serial["holds"].all()
    assert serial.equals(parallel)
    assert set(serial.columns) >= {"n", "D", "p", "budget_nats", "divergence_nats", "iteration_bound"}


def test_depth_prefixes_share_their_layers():
    full = random_brickwork(4, 5, seed=2)
    prefixes = depth_prefixes(full, [0, 2, 5])
    assert prefixes[0].depth == 0
    assert prefixes[2].layers == full.layers[:2]
    assert prefixes[5].layers == full.layers
    with pytest.raises(ParameterError):
        depth_prefixes(full, [6])


def test_noise_grid_state_divergence_falls_with_depth():
    grid = noise_grid(5, [1, 2, 3, 4, 5], [0.05, 0.1, 0.2], 0.3, seed=0)
    assert (grid["divergence_nats"] <= grid["state_divergence_nats"] + 1e-9).all()
    for _, group in grid.groupby("p"):
        values = group.sort_values("D")["state_divergence_nats"].to_numpy()
        assert (values[1:] <= values[:-1] + 1e-9).all()
