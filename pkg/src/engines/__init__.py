from .distcore import (
    BitString,
    DensePmf,
    DivergenceReport,
    collision_probability,
    divergence_report,
    hoeffding_samples,
    nats_to_bits,
    optimal_distinguisher,
    relative_entropy,
    renyi2_entropy,
    shannon_entropy,
    tv_distance,
)
from .witness import (
    BinarizeReport,
    CostClass,
    IndicatorWitness,
    MaxCutGraph,
    MaxCutWitness,
    ParityWitness,
    TableWitness,
    Witness,
    binarize,
    binarize_report,
    complement,
    constant_witness,
    evaluate,
    heavy_set_witness,
    level_set_gaps,
    maxcut_witness,
    witness_from_json,
)
from .mirror import (
    GibbsGuess,
    ProgressLedger,
    annealing_temperatures,
    check_progress,
    exact_pmf,
    initial_guess,
    iteration_cap,
    match_expectations,
    random_circuit_round_bound,
    random_circuit_tv_bound,
    update,
)
from .sampler import SampleReport, rejection_sample, rejection_sample_batch, sample_uniform_on_L
from .qsim import (
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
    von_neumann_entropy,
)
from .stab import (
    CliffordTableau,
    PauliZString,
    StabTableau,
    clifford_circuit,
    clifford_gates,
    find_z_string,
    random_clifford,
    sample_clifford_tableau,
    tableau_from_clifford,
    z_string_witness,
)
from .xhog import XhogParams, XhogScore, heavy_mass_size_bound, score_samples, spoof_xhog, xeb_fidelity, xhog_sample_bound
from .noisebudget import (
    SdpiSpec,
    depolarizing_alpha,
    depth_prefixes,
    entropy_budget,
    iteration_bound,
    noise_grid,
    noisy_chain_check,
    sampling_cost_bound,
    verify_sdpi,
)
from .referee import ClaimCheck, sample_schedule, verify_claim, verify_exact
from .rng import stream

__all__ = [
    "BitString",
    "DensePmf",
    "DivergenceReport",
    "collision_probability",
    "divergence_report",
    "hoeffding_samples",
    "nats_to_bits",
    "optimal_distinguisher",
    "relative_entropy",
    "renyi2_entropy",
    "shannon_entropy",
    "tv_distance",
    "BinarizeReport",
    "CostClass",
    "IndicatorWitness",
    "MaxCutGraph",
    "MaxCutWitness",
    "ParityWitness",
    "TableWitness",
    "Witness",
    "binarize",
    "binarize_report",
    "complement",
    "constant_witness",
    "evaluate",
    "heavy_set_witness",
    "level_set_gaps",
    "maxcut_witness",
    "witness_from_json",
    "GibbsGuess",
    "ProgressLedger",
    "annealing_temperatures",
    "check_progress",
    "exact_pmf",
    "initial_guess",
    "iteration_cap",
    "match_expectations",
    "random_circuit_round_bound",
    "random_circuit_tv_bound",
    "update",
    "SampleReport",
    "rejection_sample",
    "rejection_sample_batch",
    "sample_uniform_on_L",
    "Circuit",
    "DensityMatrix",
    "Gate",
    "NoiseSpec",
    "StateVector",
    "depolarize",
    "entropy_lower_bound",
    "haar_moment_diagnostic",
    "noisy_output_distribution",
    "output_distribution",
    "random_brickwork",
    "random_density_matrix",
    "run_statevector",
    "von_neumann_entropy",
    "PauliZString",
    "CliffordTableau",
    "StabTableau",
    "clifford_circuit",
    "clifford_gates",
    "find_z_string",
    "random_clifford",
    "sample_clifford_tableau",
    "tableau_from_clifford",
    "z_string_witness",
    "XhogParams",
    "XhogScore",
    "heavy_mass_size_bound",
    "score_samples",
    "spoof_xhog",
    "xeb_fidelity",
    "xhog_sample_bound",
    "SdpiSpec",
    "depolarizing_alpha",
    "depth_prefixes",
    "entropy_budget",
    "iteration_bound",
    "noise_grid",
    "noisy_chain_check",
    "sampling_cost_bound",
    "verify_sdpi",
    "ClaimCheck",
    "sample_schedule",
    "verify_claim",
    "verify_exact",
    "stream",
]
