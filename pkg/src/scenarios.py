"""
Scenario runners behind ``arena run <scenario>``.

Each runner reads a validated ScenarioConfig, writes its artifacts under
``<out>/<scenario>/`` and returns a ScenarioReport (also saved as ``report.json``).
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import pandas as pd

from .config import ScenarioConfig
from .engines import (
    DensePmf,
    NoiseSpec,
    ParityWitness,
    annealing_temperatures,
    clifford_circuit,
    collision_probability,
    entropy_lower_bound,
    exact_pmf,
    find_z_string,
    haar_moment_diagnostic,
    heavy_mass_size_bound,
    heavy_set_witness,
    initial_guess,
    maxcut_witness,
    noise_grid,
    output_distribution,
    random_brickwork,
    random_circuit_round_bound,
    random_clifford,
    renyi2_entropy,
    shannon_entropy,
    spoof_xhog,
    tableau_from_clifford,
    update,
    verify_sdpi,
    xhog_sample_bound,
    z_string_witness,
)
from .engines.mirror import worst_case_divergence
from .engines.noisebudget import annealing_beta, example_beta
from .engines.rng import SDPI, SPOOF, stream
from .engines.witness import MaxCutGraph, MaxCutWitness
from .errors import UsageError
from .main import run_game
from .models import GameConfig, ScenarioReport
from .strategies import ALICES, CliffordBob, HeavySetBob, MaxCutBob, OptimalIndicatorBob, StaticAlice

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.12g"
PARITY_CHECK_CAP = 6


def _output_dir(cfg: ScenarioConfig) -> str:
    path = os.path.join(cfg.out, cfg.scenario)
    os.makedirs(path, exist_ok=True)
    return path


def _write_csv(frame: pd.DataFrame, path: str) -> str:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"💾 Saved {len(frame)} rows to {path}")
    return path


def _game_config(cfg: ScenarioConfig, **overrides: Any) -> GameConfig:
    values = dict(
        eps=cfg.eps,
        delta=cfg.delta,
        round_cap=cfg.round_cap,
        referee_mode=cfg.referee_mode,
        recheck_history=cfg.recheck_history,
        embed_samples=cfg.embed_samples,
    )
    values.update(overrides)
    return GameConfig(**values)


def build_target(cfg: ScenarioConfig) -> Tuple[DensePmf, str]:
    """The target distribution named by ``cfg.target`` and a label for transcripts."""
    if cfg.target == "brickwork":
        circuit = random_brickwork(cfg.n, cfg.depth, cfg.seed)
        return output_distribution(circuit), f"brickwork n={cfg.n} depth={cfg.depth} seed={cfg.seed}"
    if cfg.target == "uniform":
        return DensePmf.uniform(cfg.n), f"uniform n={cfg.n}"
    if cfg.target == "point-mass":
        return DensePmf.point_mass(cfg.n, 0), f"point mass at 0^{cfg.n}"
    if not os.path.exists(cfg.pmf_file):
        raise UsageError(f"pmf file not found: {cfg.pmf_file}")
    with open(cfg.pmf_file, "r") as f:
        pmf = DensePmf.from_json(f.read())
    return pmf, f"pmf file {os.path.basename(cfg.pmf_file)}"


def run_game_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    target, label = build_target(cfg)
    out = _output_dir(cfg)
    alice = ALICES[cfg.alice]()
    bob = OptimalIndicatorBob() if cfg.bob == "optimal-indicator" else HeavySetBob()

    transcript = run_game(_game_config(cfg), alice, bob, target, cfg.seed, label, output_dir=out)
    results = {
        "outcome": transcript.outcome.value,
        "rounds": len(transcript.rounds),
        "updates": transcript.updates,
        "round_cap": transcript.round_cap,
        "round_bound": transcript.round_bound,
        "within_round_bound": transcript.updates <= transcript.round_bound,
        "initial_divergence": transcript.initial_divergence,
        "final_divergence": transcript.final_divergence,
        "final_tv": transcript.final_tv,
        "final_tv_at_most_eps": transcript.final_tv <= cfg.eps,
        "errors": transcript.errors,
    }
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"target": label, "alice": cfg.alice, "bob": cfg.bob},
        results=results,
        artifacts=[os.path.join(out, "transcript.json"), os.path.join(out, "rounds.csv")],
    )


def run_xhog_spoof(cfg: ScenarioConfig) -> ScenarioReport:
    out = _output_dir(cfg)
    n = cfg.n
    nu = output_distribution(random_brickwork(n, cfg.depth, cfg.seed))
    f = heavy_set_witness(nu)
    heavy = heavy_mass_size_bound(nu, f, delta=cfg.delta)

    def one(rep: int) -> Dict[str, Any]:
        report = spoof_xhog(f, nu, cfg.k, stream(cfg.seed, SPOOF, rep), eps=cfg.eps, b=cfg.b)
        return {
            "repetition": rep,
            "b": report.b,
            "mean_prob_scaled": report.score.mean_prob * (1 << n),
            "xeb": report.score.xeb,
            "passes_b": report.score.passes_b,
            "trials": report.trials,
            "draws": report.draws,
            "evaluations_per_sample": report.trials / report.draws,
            "geometric_evaluations": report.geometric_evaluations,
            "eps4_evaluations": report.eps4_evaluations,
            "set_size": report.set_size,
            "exact_gap": report.exact_gap,
            "exact_mean_prob_scaled": report.exact_mean_prob * (1 << n),
        }

    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        frame = pd.DataFrame(list(executor.map(one, range(cfg.repetitions))))
    csv_path = _write_csv(frame, os.path.join(out, "spoof.csv"))

    first = frame.iloc[0]
    b = float(first["b"])
    per_sample = frame["evaluations_per_sample"]
    results = {
        "set_size": int(first["set_size"]),
        "exact_gap": float(first["exact_gap"]),
        "b": b,
        "exact_mean_prob_scaled": float(first["exact_mean_prob_scaled"]),
        "set_average_at_least_b": bool(first["exact_mean_prob_scaled"] >= b - 1e-9),
        "pass_rate": float(frame["passes_b"].mean()),
        "mean_prob_scaled": float(frame["mean_prob_scaled"].mean()),
        "mean_evaluations_per_sample": float(per_sample.mean()),
        "evaluations_stderr": float(per_sample.std(ddof=1) / math.sqrt(len(frame))) if len(frame) > 1 else 0.0,
        "expected_evaluations_per_sample": float((1 << n) / first["set_size"]),
        "eps4_evaluations": float(first["eps4_evaluations"]),
        "xhog_sample_bound": xhog_sample_bound(b, 1.0),
        "heavy_mass": heavy.mass,
        "heavy_required_size": heavy.required_size,
        "heavy_size_bound_holds": heavy.holds,
        "heavy_delta_required_size": heavy.delta_required_size,
        "heavy_delta_applicable": heavy.delta_applicable,
    }
    logger.info(
        f"🎭 XHOG spoof: pass rate {results['pass_rate']:.3f}, "
        f"{results['mean_evaluations_per_sample']:.3f} evaluations per sample "
        f"(expected {results['expected_evaluations_per_sample']:.3f})"
    )
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"n": n, "depth": cfg.depth, "k": cfg.k, "eps": cfg.eps, "repetitions": cfg.repetitions},
        results=results,
        artifacts=[csv_path],
    )


def _deterministic_parities(nu: DensePmf) -> List[int]:
    """Masks whose parity is constant under ``nu``, by enumeration."""
    masks = []
    for mask in range(1, 1 << nu.width):
        expectation = ParityWitness(nu.width, mask).expectation(nu)
        if expectation < 1e-9 or expectation > 1.0 - 1e-9:
            masks.append(mask)
    return masks


def run_clifford(cfg: ScenarioConfig) -> ScenarioReport:
    out = _output_dir(cfg)
    n = cfg.n
    uniform = DensePmf.uniform(n)

    def one(i: int) -> Dict[str, Any]:
        gates = random_clifford(n, cfg.seed, key=(i,))
        z = find_z_string(tableau_from_clifford(gates, n))
        nu = output_distribution(clifford_circuit(gates, n, cfg.seed))
        row: Dict[str, Any] = {
            "circuit": i,
            "gates": len(gates),
            "z_string": str(z) if z is not None else None,
            "exact_gap": z_string_witness(z).gap(nu, uniform) if z is not None else None,
            "parity_checked": n <= PARITY_CHECK_CAP,
            "no_parity_confirmed": None,
        }
        if z is None and n <= PARITY_CHECK_CAP:
            row["no_parity_confirmed"] = not _deterministic_parities(nu)
        return row

    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        frame = pd.DataFrame(list(executor.map(one, range(cfg.circuits))))
    csv_path = _write_csv(frame, os.path.join(out, "clifford.csv"))

    found = frame[frame["z_string"].notna()]
    missing = frame[frame["z_string"].isna()]
    results: Dict[str, Any] = {
        "circuits": len(frame),
        "with_z_string": len(found),
        "min_exact_gap": float(found["exact_gap"].astype(float).min()) if len(found) else None,
        "all_gaps_half": bool(np.allclose(found["exact_gap"].astype(float), 0.5, atol=1e-9)) if len(found) else None,
        "without_z_string": len(missing),
        "without_z_string_confirmed": bool(missing["no_parity_confirmed"].all())
        if len(missing) and n <= PARITY_CHECK_CAP
        else None,
    }

    artifacts = [csv_path]
    if len(found):
        index = int(found.iloc[0]["circuit"])
        gates = random_clifford(n, cfg.seed, key=(index,))
        z = find_z_string(tableau_from_clifford(gates, n))
        nu = output_distribution(clifford_circuit(gates, n, cfg.seed))
        game_dir = os.path.join(out, "game")
        os.makedirs(game_dir, exist_ok=True)
        transcript = run_game(
            _game_config(cfg, round_cap=1),
            StaticAlice(),
            CliffordBob(z),
            nu,
            cfg.seed,
            f"clifford circuit {index}",
            output_dir=game_dir,
        )
        first = transcript.rounds[0]
        results.update(
            {
                "game_circuit": index,
                "game_z_string": str(z),
                "game_verdict": first.verdict.value,
                "game_empirical_gap": first.empirical_gaps[0] if first.empirical_gaps else None,
                "game_samples_per_side": first.referee_samples_per_side,
            }
        )
        artifacts.append(os.path.join(game_dir, "transcript.json"))

    logger.info(f"🧮 Clifford: {results['with_z_string']}/{results['circuits']} circuits have a Z-string")
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"n": n, "circuits": cfg.circuits, "eps": cfg.eps},
        results=results,
        artifacts=artifacts,
    )


def run_maxcut(cfg: ScenarioConfig) -> ScenarioReport:
    out = _output_dir(cfg)
    n = cfg.n
    graph = MaxCutGraph.random_regular(cfg.degree, n, cfg.seed)
    cuts = graph.cut_sizes()
    best = int(cuts.max())
    target = DensePmf.from_weights((cuts == best).astype(float))

    game_dir = os.path.join(out, "game")
    os.makedirs(game_dir, exist_ok=True)
    transcript = run_game(
        _game_config(cfg),
        ALICES["mirror-descent"](),
        MaxCutBob(graph),
        target,
        cfg.seed,
        f"maxcut {cfg.degree}-regular n={n}",
        output_dir=game_dir,
    )

    f_table = maxcut_witness(graph).table()
    played = MaxCutWitness(graph, complemented=True)
    budget = worst_case_divergence(n)
    guess = initial_guess(n, cfg.eps)
    rows = []
    for t in range(transcript.updates + 1):
        mu, _ = exact_pmf(guess)
        temperatures = annealing_temperatures(t, cfg.eps)
        gibbs = DensePmf.from_weights(np.exp(temperatures["update_rule"] * (f_table - f_table.max())))
        rows.append(
            {
                "t": t,
                "expected_f": float(mu.probs @ f_table),
                "expected_cut": float(mu.probs @ cuts),
                "max_cut_mass": mu.mass(cuts == best),
                "beta_update_rule": temperatures["update_rule"],
                "beta_example_form": temperatures["example_form"],
                "gibbs_form_error": float(np.abs(mu.probs - gibbs.probs).max()),
            }
        )
        guess = update(guess, played)
    frame = pd.DataFrame(rows)
    csv_path = _write_csv(frame, os.path.join(out, "maxcut.csv"))

    expected = frame["expected_f"].to_numpy()
    results = {
        "max_cut": best,
        "edges": len(graph.edges),
        "outcome": transcript.outcome.value,
        "updates": transcript.updates,
        "final_expected_f": float(expected[-1]),
        "target_f": float(best / (n * cfg.degree)),
        "expected_f_monotone": bool(np.all(np.diff(expected) >= -1e-12)),
        "max_gibbs_form_error": float(frame["gibbs_form_error"].max()),
        "noiseless_annealing_beta": annealing_beta(cfg.eps, budget),
        "final_tv": transcript.final_tv,
    }
    if cfg.rates:
        p = cfg.rates[0]
        results["noisy_example_beta"] = example_beta(cfg.eps, n, cfg.depth, p)
        results["noisy_example_rate"] = p
    logger.info(
        f"✂️ MAXCUT: E[f_G] rose from {expected[0]:.4f} to {expected[-1]:.4f} in {transcript.updates} updates"
    )
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"n": n, "degree": cfg.degree, "eps": cfg.eps},
        results=results,
        artifacts=[csv_path, os.path.join(game_dir, "transcript.json")],
    )


def run_entropy_survey(cfg: ScenarioConfig) -> ScenarioReport:
    out = _output_dir(cfg)
    n = cfg.n

    def one(i: int) -> Dict[str, Any]:
        nu = output_distribution(random_brickwork(n, cfg.depth, cfg.seed, (i,)))
        return {
            "circuit": i,
            "shannon": shannon_entropy(nu),
            "renyi2": renyi2_entropy(nu),
            "collision": collision_probability(nu),
            "p_zero": float(nu.probs[0]),
        }

    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        frame = pd.DataFrame(list(executor.map(one, range(cfg.circuits))))
    csv_path = _write_csv(frame, os.path.join(out, "entropy.csv"))

    moments = haar_moment_diagnostic(n, cfg.depth, cfg.circuits, cfg.seed, threads=cfg.threads)
    thresholds = []
    for delta in cfg.deltas:
        bound = entropy_lower_bound(n, delta)
        thresholds.append(
            {
                "delta": delta,
                "entropy_lower_bound": bound,
                "fraction_shannon_below": float((frame["shannon"] < bound).mean()),
                "fraction_renyi2_below": float((frame["renyi2"] < bound).mean()),
                "round_bound": random_circuit_round_bound(cfg.eps, delta),
            }
        )
    results = {
        "thresholds": thresholds,
        "mean_shannon": float(frame["shannon"].mean()),
        "mean_renyi2": float(frame["renyi2"].mean()),
        "mean_collision": moments.mean_collision,
        "collision_stderr": moments.collision_stderr,
        "haar_collision": moments.haar_collision,
        "mean_p_zero": moments.mean_p,
        "uniform_p": 1.0 / (1 << n),
    }
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"n": n, "depth": cfg.depth, "circuits": cfg.circuits, "deltas": cfg.deltas},
        results=results,
        artifacts=[csv_path],
    )


def run_noise_grid(cfg: ScenarioConfig) -> ScenarioReport:
    out = _output_dir(cfg)
    grid = noise_grid(cfg.n, cfg.depths, cfg.rates, cfg.eps, cfg.seed, threads=cfg.threads)
    grid_path = _write_csv(grid, os.path.join(out, "noise_grid.csv"))

    sdpi = []
    for index, p in enumerate(cfg.rates):
        report = verify_sdpi(NoiseSpec(p), cfg.sdpi_n, cfg.sdpi_trials, stream(cfg.seed, SDPI, index))
        sdpi.append({"p": p, "alpha": report.alpha, "worst_ratio": report.worst_ratio, "holds": report.holds})
    sdpi_path = _write_csv(pd.DataFrame(sdpi), os.path.join(out, "sdpi.csv"))

    def decreasing(column: str) -> bool:
        return all(
            bool(np.all(np.diff(group.sort_values("D")[column].to_numpy()) <= 1e-9))
            for _, group in grid.groupby("p")
        )

    results = {
        "points": len(grid),
        "budget_holds": bool(grid["holds"].all()),
        "divergence_decreases_with_depth": decreasing("state_divergence_nats"),
        "measured_divergence_decreases_with_depth": decreasing("divergence_nats"),
        "measured_below_state_divergence": bool(
            (grid["divergence_nats"] <= grid["state_divergence_nats"] + 1e-9).all()
        ),
        "sdpi_holds": all(row["holds"] for row in sdpi),
        "max_iteration_bound": int(grid["iteration_bound"].max()),
        "noiseless_iteration_cap": int(grid["noiseless_iteration_cap"].iloc[0]),
    }
    return ScenarioReport(
        scenario=cfg.scenario,
        seed=cfg.seed,
        parameters={"n": cfg.n, "depths": cfg.depths, "rates": cfg.rates, "eps": cfg.eps},
        results=results,
        artifacts=[grid_path, sdpi_path],
    )


RUNNERS: Dict[str, Callable[[ScenarioConfig], ScenarioReport]] = {
    "game": run_game_scenario,
    "xhog-spoof": run_xhog_spoof,
    "clifford": run_clifford,
    "maxcut": run_maxcut,
    "entropy-survey": run_entropy_survey,
    "noise-grid": run_noise_grid,
}


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    """Run one scenario and save ``report.json`` next to its other artifacts."""
    logger.info(f"🚀 Running scenario {cfg.scenario} (seed {cfg.seed})")
    report = RUNNERS[cfg.scenario](cfg)
    path = os.path.join(_output_dir(cfg), "report.json")
    report.artifacts.append(path)
    with open(path, "w") as f:
        f.write(report.model_dump_json(indent=2))
    logger.info(f"✅ Scenario {cfg.scenario} finished, report saved to {path}")
    return report
