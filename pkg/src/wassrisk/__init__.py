"""Robust distortion risk measures with a Wasserstein-distance penalty.

Worst-case spectral/distortion risk over distributions with prescribed
mean and standard deviation, optionally restricted to a 2-Wasserstein
ball around a reference distribution, with a linear penalty on the
squared distance.  Closed forms on a midpoint quantile lattice, an
isotonic-projection path for non-concave distortions, and a brute-force
oracle for verifying solver output.
"""

from .distortions import (DistortionSpec, GammaGrid, distortion_value,
                          gamma_grid, parse_distortion, rho)
from .errors import (AssumptionA1Violated, AssumptionA4Violated,
                     DegenerateGrid, DegenerateProjection, GridSizeMismatch,
                     InfeasibleRadius, IngestError, InternalCheckFailed,
                     InvalidDistortion, MomentMismatch, NotConcave,
                     RadiusOutOfRange, RhoDegenerate, SamplingExhausted,
                     VerificationFailed, WassriskError)
from .grids import (MomentTarget, QuantileGrid, corr, grid_mean, grid_std,
                    midpoints, standardize_to, wasserstein2_sq)
from .isotonic import IsotonicResult, isotonic_project, projection_gap
from .oracle import (OracleConfig, OracleReport, projected_ascent,
                     sample_feasible, verify)
from .references import (ReferenceDistribution, inverse_normal_cdf,
                         load_samples_csv, sample_quantile,
                         wasserstein2_sq_decomposed)
from .solver import (DEFAULT_GRID_N, A4Report, PenaltySpec, ProblemSpec,
                     Regime, Solution, SolverDiagnostics,
                     check_assumption_a4, delta_star, epsilon_bounds,
                     epsilon_star, f_of_delta, objective_along_family,
                     objective_eval, solve_ball, solve_moment_set)

__version__ = "0.1.0"

__all__ = [
    "AssumptionA1Violated", "AssumptionA4Violated", "A4Report",
    "DEFAULT_GRID_N", "DegenerateGrid", "DegenerateProjection",
    "DistortionSpec", "GammaGrid", "GridSizeMismatch", "InfeasibleRadius",
    "IngestError", "InternalCheckFailed", "InvalidDistortion",
    "IsotonicResult", "MomentMismatch", "MomentTarget", "NotConcave",
    "OracleConfig", "OracleReport", "PenaltySpec", "ProblemSpec",
    "QuantileGrid", "RadiusOutOfRange", "Regime", "ReferenceDistribution",
    "RhoDegenerate", "SamplingExhausted", "Solution", "SolverDiagnostics",
    "VerificationFailed", "WassriskError", "check_assumption_a4", "corr",
    "delta_star", "distortion_value", "epsilon_bounds", "epsilon_star",
    "f_of_delta", "gamma_grid", "grid_mean", "grid_std",
    "inverse_normal_cdf", "isotonic_project", "load_samples_csv",
    "midpoints", "objective_along_family", "objective_eval",
    "parse_distortion", "projected_ascent", "projection_gap", "rho",
    "sample_feasible", "sample_quantile", "solve_ball", "solve_moment_set",
    "standardize_to", "verify", "wasserstein2_sq",
    "wasserstein2_sq_decomposed",
]
