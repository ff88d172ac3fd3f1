"""
Continuum objects: Bohmian and Bohm-Dirac velocities, trajectory
integration, and the lattice-to-continuum drift comparison.
"""

from .packets import GaussianPacket, GridWavefunction, PlaneWave
from .velocity import VelocityField, VelocityKind, bohm_dirac_velocity, bohm_velocity
from .integrate import BohmPath, bohm_dirac_trajectories, equivariance_tv, integrate_bohm
from .continuum import continuum_limit_report, discretize_packet, lattice_drift

__all__ = [
    "GaussianPacket",
    "GridWavefunction",
    "PlaneWave",
    "VelocityField",
    "VelocityKind",
    "bohm_dirac_velocity",
    "bohm_velocity",
    "BohmPath",
    "bohm_dirac_trajectories",
    "equivariance_tv",
    "integrate_bohm",
    "continuum_limit_report",
    "discretize_packet",
    "lattice_drift",
]
