"""Lévy–Ciesielski Brownian paths, exact modulus suprema, and bound checks.

The package builds truncated Brownian motion from the Schauder tent basis,
computes exact suprema of modulus-of-continuity statistics on those
piecewise-linear paths, evaluates the matching closed-form probability
bounds, and verifies bound against frequency by reproducible Monte Carlo
with exact binomial confidence intervals.
"""

from .bounds import (
    A_UNIFORM,
    THEOREM_IDS,
    BoundEvaluation,
    SeriesAudit,
    block_bound,
    fixed_delta_bound,
    fixed_delta_constant,
    local_deviation_bound,
    m_of_epsilon,
    scaled_fixed_delta_bound,
    scaled_uniform_bound,
    series_audit,
    tail_bound,
    truncated_global_bound,
    truncated_global_constant,
    truncated_local_bound,
    uniform_bound,
    uniform_constant,
)
from .modulus import (
    GLOBAL_CORRECTION_COEFF,
    LOCAL_CORRECTION_COEFF,
    DomainError,
    corrected_global_modulus,
    global_correction,
    global_modulus,
    local_correction,
    local_modulus,
    scaled_correction,
)
from .montecarlo import (
    RUNNABLE_THEOREMS,
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    block_tail_allowance,
    clopper_pearson,
    pair_tail_allowance,
    run_block_local,
    run_experiment,
    run_fixed_delta,
    run_local_deviation,
    run_tail,
    run_truncated_global,
    run_truncated_local,
    run_uniform,
    scaling_check,
)
from .paths import (
    HaarCoefficients,
    TruncatedPath,
    evaluate_truncated,
    evaluate_truncated_many,
    path_from_json,
    path_to_json,
    sample_coefficients,
    sample_level_coefficients,
    sample_node_values_prefix,
    schauder,
)
from .suprema import (
    FIXED_GLOBAL,
    GAP_GLOBAL,
    GAP_GLOBAL_CORRECTED,
    LOCAL_PLAIN,
    BandSupremum,
    DenominatorKind,
    LevelMismatchError,
    block_grid_oracle,
    block_oracle_slack,
    block_sup,
    cell_pair_polygon,
    fixed_gap_range_statistic,
    gap_pairs_exceed,
    global_band_sup,
    grid_oracle,
    grid_oracle_global_many,
    local_corrected,
    local_sup,
    oracle_slack,
    range_spread_upper,
    uniform_band_sup,
)

__version__ = "0.1.0"

__all__ = [
    "A_UNIFORM",
    "BandSupremum",
    "BoundEvaluation",
    "ConfigError",
    "DenominatorKind",
    "DomainError",
    "ExperimentConfig",
    "ExperimentReport",
    "FIXED_GLOBAL",
    "GAP_GLOBAL",
    "GAP_GLOBAL_CORRECTED",
    "GLOBAL_CORRECTION_COEFF",
    "HaarCoefficients",
    "LOCAL_CORRECTION_COEFF",
    "LOCAL_PLAIN",
    "LevelMismatchError",
    "RUNNABLE_THEOREMS",
    "SeriesAudit",
    "THEOREM_IDS",
    "TruncatedPath",
    "__version__",
    "block_bound",
    "block_grid_oracle",
    "block_oracle_slack",
    "block_sup",
    "block_tail_allowance",
    "cell_pair_polygon",
    "clopper_pearson",
    "corrected_global_modulus",
    "evaluate_truncated",
    "evaluate_truncated_many",
    "fixed_delta_bound",
    "fixed_delta_constant",
    "fixed_gap_range_statistic",
    "gap_pairs_exceed",
    "global_band_sup",
    "global_correction",
    "global_modulus",
    "grid_oracle",
    "grid_oracle_global_many",
    "local_correction",
    "local_corrected",
    "local_deviation_bound",
    "local_modulus",
    "local_sup",
    "m_of_epsilon",
    "oracle_slack",
    "pair_tail_allowance",
    "path_from_json",
    "path_to_json",
    "range_spread_upper",
    "run_block_local",
    "run_experiment",
    "run_fixed_delta",
    "run_local_deviation",
    "run_tail",
    "run_truncated_global",
    "run_truncated_local",
    "run_uniform",
    "sample_coefficients",
    "sample_level_coefficients",
    "sample_node_values_prefix",
    "scaled_correction",
    "scaled_fixed_delta_bound",
    "scaled_uniform_bound",
    "scaling_check",
    "schauder",
    "series_audit",
    "tail_bound",
    "truncated_global_bound",
    "truncated_global_constant",
    "truncated_local_bound",
    "uniform_band_sup",
    "uniform_bound",
    "uniform_constant",
]
