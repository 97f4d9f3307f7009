"""End-to-end checks of the game guarantees at moderate sizes.

These run for minutes rather than seconds; select them with ``pytest -m slow``.
"""

import math

import numpy as np
import pytest

from src.config import load_config
from src.engines import (
    DensePmf,
    IndicatorWitness,
    NoiseSpec,
    ParityWitness,
    TableWitness,
    binarize_report,
    clifford_circuit,
    depolarizing_alpha,
    entropy_lower_bound,
    exact_pmf,
    find_z_string,
    haar_moment_diagnostic,
    heavy_set_witness,
    initial_guess,
    iteration_cap,
    noise_grid,
    output_distribution,
    random_brickwork,
    random_clifford,
    rejection_sample_batch,
    relative_entropy,
    renyi2_entropy,
    sample_schedule,
    spoof_xhog,
    stream,
    tableau_from_clifford,
    tv_distance,
    update,
    verify_claim,
    verify_sdpi,
    z_string_witness,
)
from src.main import run_game
from src.models import GameConfig, Outcome, Verdict
from src.scenarios import run_scenario
from src.strategies import MirrorDescentAlice, OptimalIndicatorBob

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("n", [6, 8, 10])
@pytest.mark.parametrize("eps", [0.2, 0.3])
def test_mirror_descent_terminates_within_the_round_bound(n, eps):
    for seed in range(50):
        target = output_distribution(random_brickwork(n, 2 * n, seed=seed))
        bound = iteration_cap(relative_entropy(target, DensePmf.uniform(n)), eps)
        transcript = run_game(
            GameConfig(eps=eps, delta=0.01), MirrorDescentAlice(), OptimalIndicatorBob(), target, seed=seed
        )
        assert transcript.outcome is Outcome.ALICE_WINS
        assert transcript.updates <= bound
        assert transcript.final_tv <= eps


@pytest.mark.parametrize("n", [6, 8, 10])
def test_divergence_drops_in_every_accepted_round(n):
    eps = 0.3
    for seed in range(10):
        target = output_distribution(random_brickwork(n, 2 * n, seed=seed))
        transcript = run_game(
            GameConfig(eps=eps, referee_mode="exact"), MirrorDescentAlice(), OptimalIndicatorBob(), target, seed=seed
        )
        rounds = transcript.rounds
        for before, after in zip(rounds, rounds[1:]):
            assert before.verdict is Verdict.BOB_REFUTED_ALICE
            assert before.exact_divergence - after.exact_divergence >= eps**2 / 16 - 1e-9


def test_rejection_sampler_cost_and_accuracy():
    n, eps, t = 8, 0.5, 10
    rng = stream(8, 1)
    guess = initial_guess(n, eps)
    for _ in range(t):
        guess = update(guess, TableWitness(n, rng.uniform(size=1 << n)))
    mu, _ = exact_pmf(guess)

    samples, trials = rejection_sample_batch(guess, 100_000, stream(8, 2))
    stderr = trials.std(ddof=1) / math.sqrt(len(trials))
    assert trials.mean() <= math.exp(eps * t / 4) + 3 * stderr
    empirical = DensePmf.from_weights(np.bincount(samples, minlength=1 << n).astype(float))
    assert tv_distance(empirical, mu) <= 0.02


def test_entropy_of_random_circuits():
    n, depth, circuits = 8, 24, 500
    entropies = np.array(
        [renyi2_entropy(output_distribution(random_brickwork(n, depth, seed=3, key=(i,)))) for i in range(circuits)]
    )
    for delta in (0.1, 0.2):
        assert np.mean(entropies < entropy_lower_bound(n, delta)) <= delta
    moments = haar_moment_diagnostic(n, depth, circuits, seed=3, threads=4)
    assert moments.mean_collision == pytest.approx(moments.haar_collision, rel=0.1)


def _has_deterministic_parity(nu: DensePmf) -> bool:
    for mask in range(1, 1 << nu.width):
        value = ParityWitness(nu.width, mask).expectation(nu)
        if value < 1e-9 or value > 1 - 1e-9:
            return True
    return False


@pytest.mark.parametrize("n", [4, 6])
def test_clifford_z_strings_are_exact(n):
    uniform = DensePmf.uniform(n)
    found = 0
    for i in range(200):
        gates = random_clifford(n, 17, key=(i,))
        z = find_z_string(tableau_from_clifford(gates, n))
        nu = output_distribution(clifford_circuit(gates, n))
        if z is None:
            assert not _has_deterministic_parity(nu)
        else:
            found += 1
            assert z_string_witness(z).gap(nu, uniform) == pytest.approx(0.5, abs=1e-12)
    assert found > 0


def test_heavy_set_spoofer_passes_xhog():
    n, k, b = 10, 50, 1.15
    nu = output_distribution(random_brickwork(n, 2 * n, seed=5))
    f = heavy_set_witness(nu)
    gap = f.gap(nu, DensePmf.uniform(n))
    assert gap >= 0.2

    reports = [spoof_xhog(f, nu, k, stream(5, rep), eps=0.2, b=b) for rep in range(100)]
    assert reports[0].exact_mean_prob * (1 << n) >= 1 + 0.2
    assert sum(r.score.passes_b for r in reports) >= 95

    per_sample = np.array([r.trials / r.draws for r in reports])
    expected = (1 << n) / reports[0].set_size
    assert abs(per_sample.mean() - expected) <= 3 * per_sample.std(ddof=1) / math.sqrt(len(per_sample)) + 1e-9


def test_binarize_on_random_pairs():
    n, eps = 8, 0.25
    rng = stream(21, 0)
    reports = []
    for _ in range(1000):
        f = TableWitness(n, rng.uniform(size=1 << n))
        nu = DensePmf.from_weights(np.exp(6.0 * f.table()) * rng.uniform(0.5, 1.5, size=1 << n))
        if f.gap(nu, DensePmf.uniform(n)) < eps:
            continue
        report = binarize_report(f, eps, nu)
        assert report.witness.binary
        assert report.witness.gap(nu, DensePmf.uniform(n)) >= report.guaranteed_gap - 1e-12
        reports.append(report)
        if len(reports) == 100:
            break
    assert len(reports) == 100
    assert all(r.strong_rate == pytest.approx(eps**2 / 4) for r in reports)
    # an eps-separating input always leaves some level set at least eps/2 apart
    assert all(r.meets_strong_rate for r in reports)


def test_noise_budget_grid():
    grid = noise_grid(6, [1, 2, 3, 4, 5], [0.05, 0.1, 0.2], 0.3, seed=4, threads=4)
    assert len(grid) == 15
    bound = (1 - grid["p"]) ** (2 * grid["D"] + 2) * 6 * math.log(2)
    assert (grid["divergence_nats"] <= bound + 1e-9).all()
    assert (grid["state_divergence_nats"] <= bound + 1e-9).all()
    assert (grid["divergence_nats"] <= grid["state_divergence_nats"] + 1e-9).all()
    for _, rows in grid.groupby("p"):
        assert (rows.sort_values("D")["state_divergence_nats"].diff().dropna() <= 1e-9).all()
    for index, p in enumerate((0.1, 0.3)):
        report = verify_sdpi(NoiseSpec(p), 2, 1000, stream(4, index))
        assert report.worst_ratio <= 1 - depolarizing_alpha(p) + 1e-9


def test_referee_error_rates():
    eps, delta, reps = 0.3, 0.1, 1000
    per_side = sample_schedule(1, eps, delta)
    f = IndicatorWitness(1, np.array([False, True]))
    uniform = DensePmf.uniform(1)
    alice_far = DensePmf(1, np.array([0.35, 0.65]))
    bob_far = DensePmf(1, np.array([0.65, 0.35]))
    assert f.gap(alice_far, bob_far) == pytest.approx(eps)

    rng = stream(31, 0)
    false_accepts = sum(
        verify_claim(uniform.sample(per_side, rng), uniform.sample(per_side, rng), f, eps).accepted
        for _ in range(reps)
    )
    false_rejects = sum(
        not verify_claim(bob_far.sample(per_side, rng), alice_far.sample(per_side, rng), f, eps).accepted
        for _ in range(reps)
    )
    assert false_accepts / reps <= delta
    assert false_rejects / reps <= delta


def test_maxcut_annealing(tmp_path):
    cfg = load_config(
        "maxcut",
        overrides={"n": 12, "degree": 3, "eps": 0.1, "round_cap": 40, "referee_mode": "exact", "out": str(tmp_path)},
    )
    results = run_scenario(cfg).results
    assert results["updates"] >= 1
    assert results["expected_f_monotone"]
    assert results["max_gibbs_form_error"] < 1e-9
