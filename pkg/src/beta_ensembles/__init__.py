"""Sampling and Gaussian-fluctuation analysis of circular and Jacobi
beta-ensembles through their coefficient recursions.

Configurations are drawn for arbitrary beta > 0 by running a phase recursion
over independent random recurrence coefficients; counts of points in an
interval then cost O(n) per interval without locating any individual point.
The statistics and diagnostics modules verify the Gaussian fluctuation law
of those counts and the martingale-CLT hypotheses behind it.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .distributions import (
    SymBetaMoments,
    SymBetaParam,
    ThetaParam,
    digamma,
    expected_neg_x2log,
    sample_sym_beta,
    sample_theta,
    sym_beta_moments,
    theta_abs_moment,
    theta_moments,
)
from .ensembles import (
    CountStatistic,
    EnsembleSpec,
    PointSample,
    count_in_arc,
    count_jacobi,
    count_trials,
    draw_path,
    sample_points,
)
from .errors import BracketFailure, NumericalError, ParameterError
from .prufer import (
    PhaseTrajectory,
    VerblunskyPath,
    evolve_phase,
    phase_increment,
    phase_increment_linear,
    phase_increment_linear_centered,
)
from .seeding import mix64, trial_rng
from .statistics import (
    ExperimentReport,
    FluctuationSample,
    kolmogorov_pvalue,
    ks_statistic,
    normalize_circular,
    normalize_jacobi,
    run_fluctuation_experiment,
    summarize,
)
from .szego import PolyPair, blaschke, blaschke_trajectory, eval_polys, find_points

__all__ = [
    "__version__",
    "backend_name",
    "SymBetaMoments",
    "SymBetaParam",
    "ThetaParam",
    "digamma",
    "expected_neg_x2log",
    "sample_sym_beta",
    "sample_theta",
    "sym_beta_moments",
    "theta_abs_moment",
    "theta_moments",
    "CountStatistic",
    "EnsembleSpec",
    "PointSample",
    "count_in_arc",
    "count_jacobi",
    "count_trials",
    "draw_path",
    "sample_points",
    "BracketFailure",
    "NumericalError",
    "ParameterError",
    "PhaseTrajectory",
    "VerblunskyPath",
    "evolve_phase",
    "phase_increment",
    "phase_increment_linear",
    "phase_increment_linear_centered",
    "mix64",
    "trial_rng",
    "ExperimentReport",
    "FluctuationSample",
    "kolmogorov_pvalue",
    "ks_statistic",
    "normalize_circular",
    "normalize_jacobi",
    "run_fluctuation_experiment",
    "summarize",
    "PolyPair",
    "blaschke",
    "blaschke_trajectory",
    "eval_polys",
    "find_points",
]
