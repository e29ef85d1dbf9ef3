"""Randomized row-action methods for linear systems and sparse recovery."""

from .matrices import RowMatrix, load_matrix, load_vector, smallest_positive_singular_value
from .oracle import NumericalError, OracleResult, grid_linesearch, solve_dual, spectral_norm_sq
from .potentials import (
    ElasticNet,
    Potential,
    SmoothedElasticNet,
    SquaredNorm,
    bregman_distance,
    soft_shrink,
)
from .projections import (
    DualState,
    HalfSpace,
    Hyperplane,
    Interval,
    constraint_violation,
    enclosing_halfspace,
    exact_hyperplane_linesearch,
    exact_step_length,
    halfspace_bregman_step,
    inexact_hyperplane_step,
)
from .rng import CumulativeSampler, Xoshiro256pp, sample_row
from .solvers import IterateLog, SolverConfig, canonical_method, fit_linear_rate, rbpsfp_run, run
from .experiments import (
    InstanceSpec,
    TrialStats,
    dat_filename,
    emit_dat,
    format_sci17,
    gen_gaussian_instance,
    gen_tomography_instance,
    quantile,
    read_dat,
    run_trials,
    trace_ray,
)

__version__ = "0.1.0"

__all__ = [
    "CumulativeSampler",
    "DualState",
    "ElasticNet",
    "HalfSpace",
    "Hyperplane",
    "InstanceSpec",
    "Interval",
    "IterateLog",
    "NumericalError",
    "OracleResult",
    "Potential",
    "RowMatrix",
    "SmoothedElasticNet",
    "SolverConfig",
    "SquaredNorm",
    "TrialStats",
    "Xoshiro256pp",
    "bregman_distance",
    "canonical_method",
    "constraint_violation",
    "dat_filename",
    "emit_dat",
    "enclosing_halfspace",
    "exact_hyperplane_linesearch",
    "exact_step_length",
    "fit_linear_rate",
    "format_sci17",
    "gen_gaussian_instance",
    "gen_tomography_instance",
    "grid_linesearch",
    "halfspace_bregman_step",
    "inexact_hyperplane_step",
    "load_matrix",
    "load_vector",
    "quantile",
    "rbpsfp_run",
    "read_dat",
    "run",
    "run_trials",
    "sample_row",
    "smallest_positive_singular_value",
    "solve_dual",
    "soft_shrink",
    "spectral_norm_sq",
    "trace_ray",
]
