"""Cascading-failure simulator and mean-field solver for load-sharing networks."""

__version__ = "0.1.0"

from .bimodal import BimodalState, Branch, bimodal_step, init_bimodal, run_bimodal
from .cascade import (
    AggregateStats,
    BimodalLoads,
    CascadeOutcome,
    CascadeState,
    DeltaLoads,
    RedistributionLimitCheck,
    UniformLoads,
    apply_disturbance,
    init_loads,
    monte_carlo,
    run_cascade,
    run_trial,
    step_cascade,
    trial_rng,
    validate_redistribution_limit,
)
from .graph import (
    GraphTopology,
    RedistributionWeights,
    generate_er_graph,
    normalize_adjacency,
)
from .meanfield import (
    MeanFieldState,
    Verdict,
    init_recursion,
    recursion_step,
    run_recursion,
)
from .threshold import (
    FixedMeanSweepRow,
    NonMonotoneError,
    ThresholdResult,
    UnimodalSweepRow,
    coarse_scan,
    find_d_critical,
    sweep_bimodal_fixed_mean,
    sweep_dcrit_vs_a0,
)

__all__ = [
    "AggregateStats",
    "BimodalLoads",
    "BimodalState",
    "Branch",
    "CascadeOutcome",
    "CascadeState",
    "DeltaLoads",
    "FixedMeanSweepRow",
    "GraphTopology",
    "MeanFieldState",
    "NonMonotoneError",
    "RedistributionLimitCheck",
    "RedistributionWeights",
    "ThresholdResult",
    "UniformLoads",
    "UnimodalSweepRow",
    "Verdict",
    "apply_disturbance",
    "bimodal_step",
    "coarse_scan",
    "find_d_critical",
    "generate_er_graph",
    "init_bimodal",
    "init_loads",
    "init_recursion",
    "monte_carlo",
    "normalize_adjacency",
    "recursion_step",
    "run_bimodal",
    "run_cascade",
    "run_recursion",
    "run_trial",
    "step_cascade",
    "sweep_bimodal_fixed_mean",
    "sweep_dcrit_vs_a0",
    "trial_rng",
    "validate_redistribution_limit",
]
