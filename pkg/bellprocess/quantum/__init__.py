"""
Exact finite-dimensional quantum kinematics and dynamics.
"""

from .kinematics import ConfigSpace, HermitianOperator, Povm, PovmKind, StateVector
from .dynamics import (
    CurrentMatrix,
    RateKernel,
    assumption_c_integrand,
    current,
    evolve,
    flux_matched_rates,
    measure,
    measure_derivative,
    minimal_rates,
    rates_from_current,
    sandwich,
    spectral_coefficients,
)

__all__ = [
    "ConfigSpace",
    "HermitianOperator",
    "Povm",
    "PovmKind",
    "StateVector",
    "CurrentMatrix",
    "RateKernel",
    "assumption_c_integrand",
    "current",
    "evolve",
    "flux_matched_rates",
    "measure",
    "measure_derivative",
    "minimal_rates",
    "rates_from_current",
    "sandwich",
    "spectral_coefficients",
]
