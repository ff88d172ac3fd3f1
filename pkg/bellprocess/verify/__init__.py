"""
The verification harness: equivariance, expected jump counts, the
non-explosion diagnostics and the structural identities.
"""

from .report import BoundReport, CheckResult, GateKind, VerificationReport
from .stats import EnsembleStats, binomial_stderr, mean_and_stderr, total_variation
from .structure import additivity_check, structural_check
from .ensemble_checks import (
    distance_functional,
    equivariance_check,
    equivariance_test,
    expected_jumps_check,
    first_jump_times,
    hazard_lower_bound_check,
    jump_distance_check,
    node_avoidance_check,
    rho_leq_mu_check,
    survival_ks_check,
)
from .continuum_checks import (
    bohm_trajectory_check,
    continuum_limit_check,
    expected_distance_check,
    log_variation,
    log_variation_bound,
    log_variation_check,
    speed_bound_check,
)
from .suite import CHECKS, MONTE_CARLO_CHECKS, CheckContext, run_check, run_suite

__all__ = [
    "BoundReport",
    "CheckResult",
    "GateKind",
    "VerificationReport",
    "EnsembleStats",
    "binomial_stderr",
    "mean_and_stderr",
    "total_variation",
    "additivity_check",
    "structural_check",
    "distance_functional",
    "equivariance_check",
    "equivariance_test",
    "expected_jumps_check",
    "first_jump_times",
    "hazard_lower_bound_check",
    "jump_distance_check",
    "node_avoidance_check",
    "rho_leq_mu_check",
    "survival_ks_check",
    "bohm_trajectory_check",
    "continuum_limit_check",
    "expected_distance_check",
    "log_variation",
    "log_variation_bound",
    "log_variation_check",
    "speed_bound_check",
    "CHECKS",
    "MONTE_CARLO_CHECKS",
    "CheckContext",
    "run_check",
    "run_suite",
]
